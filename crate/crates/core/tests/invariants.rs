use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wmlab::conditions::{
    cartlidge, compare_matrices, concave_limit_condition, decreasing_determination, gao_condition,
    DeterminationForm,
};
use wmlab::schur::{
    build_certificate, kaluza_szego_check, verify_schur, AuxSequence, CertificateVariant,
};
use wmlab::solver::{
    brute_force_norm, maximizer_shape, norm_negative_p, operator_norm, operator_norm_of,
    MaximizerShape, MonotoneRestriction,
};
use wmlab::{make_weights, ExponentPair, GeneratorSpec, SolverOptions, WeightSequence};

fn pair(p: f64) -> ExponentPair {
    ExponentPair::new(p).unwrap()
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

fn generators(n: usize) -> Vec<WeightSequence> {
    let specs = [
        GeneratorSpec::constant(n),
        GeneratorSpec::power(0.5, n),
        GeneratorSpec::power(1.0, n),
        GeneratorSpec::power(2.0, n),
        GeneratorSpec::power(-0.5, n),
        GeneratorSpec::diff_power(1.5, n),
        GeneratorSpec::mean_power(1.3, 2.0, n),
        GeneratorSpec::reference_prime(1.5, n),
    ];
    specs.iter().map(|s| make_weights(s).unwrap()).collect()
}

#[test]
fn implied_bounds_dominate_the_norm() {
    for n in [2, 7, 40, 200] {
        for w in generators(n) {
            for p in [1.3, 2.0, 3.5] {
                let e = pair(p);
                let mu = operator_norm(&w, e, &opts()).unwrap().mu;
                let c = cartlidge(&w, e);
                if let Some(bound) = c.implied_bound {
                    assert!(mu <= bound * (1.0 + 1e-9), "n={n} p={p}: μ {mu} > {bound}");
                }
                let l = c.constant.unwrap();
                if l > 0.0 && l < p {
                    let g = gao_condition(&w, e, l).unwrap();
                    assert!(g.holds, "Gao must hold at the Cartlidge constant");
                    assert!(mu <= g.implied_bound.unwrap() * (1.0 + 1e-9));
                }
            }
        }
    }
}

#[test]
fn negative_exponent_bound_dominates() {
    for n in [2, 5, 12] {
        for w in generators(n) {
            for p in [-0.5, -2.0, -5.0] {
                let e = pair(p);
                let r = norm_negative_p(&w, e, &opts()).unwrap();
                let bound = cartlidge(&w, e).implied_bound.unwrap();
                assert!(
                    r.mu <= bound * (1.0 + 1e-9),
                    "n={n} p={p}: {} > {bound}",
                    r.mu
                );
            }
        }
    }
}

#[test]
fn determination_forces_decreasing_maximizers() {
    let mut checked = 0;
    for n in [4, 16, 64] {
        for w in generators(n) {
            for p in [1.5, 2.0, 3.0] {
                let e = pair(p);
                let Some(u) = cartlidge(&w, e).implied_bound else {
                    continue;
                };
                let report = decreasing_determination(&w, e, u, DeterminationForm::UForm).unwrap();
                if !report.holds {
                    continue;
                }
                checked += 1;
                let r = operator_norm(&w, e, &opts()).unwrap();
                assert_eq!(
                    maximizer_shape(&r.maximizer, 1e-9),
                    MaximizerShape::Decreasing
                );
                // the restricted search reaches the same value
                let restricted = operator_norm(
                    &w,
                    e,
                    &opts().with_restriction(MonotoneRestriction::Decreasing),
                )
                .unwrap();
                assert!((restricted.mu - r.mu).abs() <= 1e-9 * r.mu);
            }
        }
    }
    assert!(checked > 10);
}

#[test]
fn concave_limit_forces_increasing_power_form() {
    for alpha in [0.2, 0.5, 0.8] {
        let w = WeightSequence::power(alpha, 16).unwrap();
        let l = 1.0 / (alpha + 1.0);
        let w_big = WeightSequence::power(alpha, 4000).unwrap();
        assert!(concave_limit_condition(&w_big, l).unwrap().holds);
        for p in [-1.0, -3.0] {
            let r = norm_negative_p(&w, pair(p), &opts()).unwrap();
            let b = r.power_form.unwrap();
            assert_eq!(
                maximizer_shape(&b, 1e-9),
                MaximizerShape::Increasing,
                "α={alpha} p={p}"
            );
        }
    }
}

#[test]
fn l_form_threshold_is_increasing_in_p() {
    let w = WeightSequence::power(1.0, 20).unwrap();
    for l in [0.1, 0.5, 0.9] {
        let mut last = 0.0;
        for k in 0..60 {
            let p = 1.0 + 0.05 + 0.1 * k as f64;
            let r = decreasing_determination(&w, pair(p), l, DeterminationForm::LForm).unwrap();
            let t = r.details["threshold"].as_f64().unwrap();
            assert!(t > last, "L={l}, p={p}");
            last = t;
        }
    }
}

#[test]
fn comparison_orders_the_norms() {
    let mut checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(2..12);
        let a = rng.random_range(-0.5..2.5);
        let b = rng.random_range(-0.5..2.5);
        let w = WeightSequence::power(a, n).unwrap();
        let w2 = WeightSequence::power(b, n).unwrap();
        let p = [1.5, 2.0, 3.0][rng.random_range(0..3)];
        let e = pair(p);
        let cmp = compare_matrices(&w, &w2).unwrap();
        let Some(u) = cartlidge(&w, e).implied_bound else {
            continue;
        };
        let det = decreasing_determination(&w, e, u, DeterminationForm::UForm).unwrap();
        if cmp.holds && det.holds {
            checked += 1;
            let x = operator_norm(&w, e, &opts()).unwrap().norm;
            let y = operator_norm(&w2, e, &opts()).unwrap().norm;
            assert!(x <= y + 1e-9, "α={a} vs {b}, p={p}: {x} > {y}");
        }
    }
    assert!(checked > 20);
}

#[test]
fn certificates_dominate_the_solver() {
    for (variant, alpha, p) in [
        (CertificateVariant::Bennett, 1.0, 2.0),
        (CertificateVariant::Bennett, 0.8, 3.0),
        (CertificateVariant::Improved, 1.2, 2.0),
        (CertificateVariant::Improved, 1.5, 2.0),
    ] {
        let e = pair(p);
        for n in [10, 100] {
            let cert = build_certificate(variant, alpha, e, n).unwrap();
            let report = verify_schur(&cert, e).unwrap();
            assert!(report.holds);
            let norm = operator_norm_of(&cert, e, &opts()).unwrap().norm;
            assert!(
                norm <= report.bound * (1.0 + 1e-9),
                "{variant:?} α={alpha}: {norm}"
            );
        }
    }
    let w = WeightSequence::constant(200).unwrap();
    let aux = AuxSequence::new((1..=200).map(|n| (n as f64).powf(-0.5)).collect(), 4.0).unwrap();
    let ks = kaluza_szego_check(&w, pair(2.0), &aux).unwrap();
    assert!(ks.holds);
    let mu = operator_norm(&w, pair(2.0), &opts()).unwrap().mu;
    assert!(mu <= ks.implied_bound.unwrap());
}

#[test]
fn small_sections_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let n = rng.random_range(1..=4);
        let w = WeightSequence::new((0..n).map(|_| rng.random_range(0.1..5.0)).collect()).unwrap();
        for p in [1.5, 2.5, -1.5] {
            let e = pair(p);
            let fast = if p > 0.0 {
                operator_norm(&w, e, &opts()).unwrap().norm
            } else {
                norm_negative_p(&w, e, &opts()).unwrap().mu
            };
            let slow = brute_force_norm(&w, e, &opts()).unwrap();
            assert!(
                (fast - slow).abs() <= 1e-6 * slow,
                "p={p}: {fast} vs {slow}"
            );
        }
    }
}
