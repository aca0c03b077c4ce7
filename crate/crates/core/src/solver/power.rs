use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kkt::normalize_p;
use super::{
    project_monotone, stationarity_residual, MonotoneRestriction, NonnegativeOperator, NormResult,
    SolverOptions, KKT_TOL,
};
use crate::error::{invalid, Result};
use crate::sequences::{ExponentPair, WeightSequence};

pub(crate) struct Climb {
    pub mu: f64,
    /// normalized so that `Σ b^p = 1`
    pub b: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

fn objective<O: NonnegativeOperator>(op: &O, b: &[f64], p: f64) -> f64 {
    crate::sum::sum(op.apply(b).into_iter().map(|y| y.powf(p)))
}

// Keeps simplex coordinates a = b^p above 1e-300 when p < 0.
fn clamp_for_negative_p(b: &mut [f64], p: f64) {
    if p < 0.0 {
        let cap = 1e-300f64.powf(1.0 / p);
        for x in b.iter_mut() {
            if *x > cap {
                *x = cap;
            }
        }
    }
}

/// Nonlinear power iteration `b ← Φ_q(Aᵀ Φ_p(A b))` on `Σ b^p = 1`, with
/// projection onto a monotone cone (in `b`) when `restriction` is set and a
/// geometric back-off whenever a step fails to increase the objective.
pub(crate) fn climb<O: NonnegativeOperator>(
    op: &O,
    p: f64,
    start: &[f64],
    restriction: MonotoneRestriction,
    opts: &SolverOptions,
    residual: &dyn Fn(&[f64], f64) -> f64,
) -> Climb {
    let restricted = restriction != MonotoneRestriction::None;
    let mut b = normalize_p(&project_monotone(start, restriction), p);
    clamp_for_negative_p(&mut b, p);
    let mut mu = objective(op, &b, p);
    let mut iterations = 0;
    let mut converged = false;
    let mut res = f64::NAN;
    while iterations < opts.max_iter {
        iterations += 1;
        let g: Vec<f64> = op.apply(&b).into_iter().map(|y| y.powf(p - 1.0)).collect();
        let mut cand: Vec<f64> = op
            .apply_transpose(&g)
            .into_iter()
            .map(|z| z.powf(1.0 / (p - 1.0)))
            .collect();
        if restricted {
            cand = project_monotone(&cand, restriction);
        }
        cand = normalize_p(&cand, p);
        clamp_for_negative_p(&mut cand, p);
        let mut mu_c = objective(op, &cand, p);
        if !(mu_c >= mu * (1.0 - 1e-14)) {
            let mut t = 0.5;
            let mut accepted = false;
            for _ in 0..50 {
                let mix: Vec<f64> = b
                    .iter()
                    .zip(&cand)
                    .map(|(x, y)| ((1.0 - t) * x.ln() + t * y.ln()).exp())
                    .collect();
                let mix = normalize_p(&mix, p);
                let m = objective(op, &mix, p);
                if m >= mu {
                    cand = mix;
                    mu_c = m;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                res = residual(&b, mu);
                converged = restricted || res < KKT_TOL;
                break;
            }
        }
        let rel = (mu_c - mu).abs() / mu;
        b = cand;
        mu = mu_c;
        if rel < opts.tol {
            res = residual(&b, mu);
            if restricted || res < KKT_TOL {
                converged = true;
                break;
            }
        }
    }
    if res.is_nan() {
        res = residual(&b, mu);
    }
    Climb {
        mu,
        b,
        iterations,
        converged,
        residual: res,
    }
}

/// Random start: `s` uniform on the simplex, `b = s^{1/p}`, sorted to lie in
/// the requested cone.
pub(crate) fn random_start(
    n: usize,
    p: f64,
    restriction: MonotoneRestriction,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    use rand::Rng;
    let mut b: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
            (-u.ln()).powf(1.0 / p)
        })
        .collect();
    match restriction {
        MonotoneRestriction::None => {}
        MonotoneRestriction::Increasing => b.sort_by(|x, y| x.total_cmp(y)),
        MonotoneRestriction::Decreasing => b.sort_by(|x, y| y.total_cmp(x)),
    }
    b
}

pub(crate) fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs the uniform start plus `opts.restarts` random starts in parallel and
/// keeps the best value.
pub(crate) fn multi_start<O: NonnegativeOperator + Sync>(
    op: &O,
    p: f64,
    restriction: MonotoneRestriction,
    opts: &SolverOptions,
    residual: &(dyn Fn(&[f64], f64) -> f64 + Sync),
) -> (Climb, f64) {
    use rayon::prelude::*;
    let n = op.dim();
    let runs: Vec<Climb> = (0..=opts.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                vec![1.0; n]
            } else {
                random_start(n, p, restriction, &mut restart_rng(opts.seed, r))
            };
            climb(op, p, &start, restriction, opts, residual)
        })
        .collect();
    let hi = runs.iter().map(|c| c.mu).fold(f64::NEG_INFINITY, f64::max);
    let lo = runs.iter().map(|c| c.mu).fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.mu > a.mu { b } else { a })
        .expect("at least one run");
    (best, spread)
}

/// Norm of the weighted mean matrix on `l^p`, `p > 1`.
///
/// Unrestricted runs start from the uniform vector only: the iteration is
/// monotone and the objective is concave in `a^p`, so the limit is global.
/// With a monotone restriction the projected iteration is run from several
/// starts and the best value is kept.
pub fn operator_norm(
    w: &WeightSequence,
    e: ExponentPair,
    opts: &SolverOptions,
) -> Result<NormResult> {
    if e.is_negative() {
        return Err(invalid("operator_norm needs p > 1; use norm_negative_p"));
    }
    opts.validate()?;
    let p = e.p();
    let residual = |b: &[f64], mu: f64| stationarity_residual(w, p, b, mu);
    let (run, spread) = match opts.monotone_restriction {
        MonotoneRestriction::None => (
            climb(
                w,
                p,
                &vec![1.0; w.len()],
                MonotoneRestriction::None,
                opts,
                &residual,
            ),
            None,
        ),
        r => {
            let (run, spread) = multi_start(w, p, r, opts, &residual);
            (run, Some(spread))
        }
    };
    Ok(NormResult {
        mu: run.mu,
        norm: run.mu.powf(1.0 / p),
        maximizer: run.b,
        kkt_residual: run.residual,
        iterations: run.iterations,
        converged: run.converged,
        restart_spread: spread,
        power_form: None,
    })
}

/// `l^p` norm (`p > 1`) of an arbitrary nonnegative operator, with the
/// generic stationarity residual `|Aᵀ Φ_p(A a) - μ Φ_p(a)|`.
pub fn operator_norm_of<O: NonnegativeOperator>(
    op: &O,
    e: ExponentPair,
    opts: &SolverOptions,
) -> Result<NormResult> {
    if e.is_negative() {
        return Err(invalid("operator_norm_of needs p > 1"));
    }
    opts.validate()?;
    let p = e.p();
    let residual = |b: &[f64], mu: f64| {
        let g: Vec<f64> = op.apply(b).into_iter().map(|y| y.powf(p - 1.0)).collect();
        let z = op.apply_transpose(&g);
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for (zk, bk) in z.iter().zip(b) {
            let rhs = mu * bk.powf(p - 1.0);
            worst = worst.max((zk - rhs).abs());
            scale = scale.max(rhs);
        }
        if scale > 0.0 {
            worst / scale
        } else {
            worst
        }
    };
    let run = climb(
        op,
        p,
        &vec![1.0; op.dim()],
        opts.monotone_restriction,
        opts,
        &residual,
    );
    Ok(NormResult {
        mu: run.mu,
        norm: run.mu.powf(1.0 / p),
        maximizer: run.b,
        kkt_residual: run.residual,
        iterations: run.iterations,
        converged: run.converged,
        restart_spread: None,
        power_form: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{maximizer_shape, MaximizerShape, SHAPE_TOL};

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn single_row_has_norm_one() {
        let w = WeightSequence::power(0.7, 1).unwrap();
        let r = operator_norm(&w, ExponentPair::new(3.0).unwrap(), &opts()).unwrap();
        assert_eq!(r.norm, 1.0);
        assert_eq!(r.maximizer, vec![1.0]);
        assert!(r.converged);
    }

    #[test]
    fn two_by_two_cesaro() {
        let w = WeightSequence::constant(2).unwrap();
        let r = operator_norm(&w, ExponentPair::new(2.0).unwrap(), &opts()).unwrap();
        let want = ((3.0 + 5f64.sqrt()) / 4.0).sqrt();
        assert!((r.norm - want).abs() < 1e-12, "{} vs {want}", r.norm);
        assert!(r.converged);
        assert!(r.kkt_residual < 1e-10);
    }

    #[test]
    fn restricted_search_matches_when_maximizer_is_decreasing() {
        let w = WeightSequence::power(1.0, 30).unwrap();
        let e = ExponentPair::new(2.0).unwrap();
        let free = operator_norm(&w, e, &opts()).unwrap();
        assert_eq!(
            maximizer_shape(&free.maximizer, SHAPE_TOL),
            MaximizerShape::Decreasing
        );
        let dec = operator_norm(
            &w,
            e,
            &opts().with_restriction(MonotoneRestriction::Decreasing),
        )
        .unwrap();
        assert!(((dec.mu - free.mu) / free.mu).abs() < 1e-8);
    }

    #[test]
    fn rejects_negative_p_and_bad_options() {
        let w = WeightSequence::constant(3).unwrap();
        assert!(operator_norm(&w, ExponentPair::new(-1.0).unwrap(), &opts()).is_err());
        let bad = SolverOptions { tol: 0.0, ..opts() };
        assert!(operator_norm(&w, ExponentPair::new(2.0).unwrap(), &bad).is_err());
    }

    #[test]
    fn non_convergence_is_flagged_not_an_error() {
        let w = WeightSequence::constant(200).unwrap();
        let o = SolverOptions {
            max_iter: 2,
            ..opts()
        };
        let r = operator_norm(&w, ExponentPair::new(2.0).unwrap(), &o).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 2);
        assert!(r.norm > 1.0);
    }
}
