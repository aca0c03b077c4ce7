use serde::Serialize;

use super::Verdict;
use crate::error::{invalid, Error, Result};
use crate::sequences::{make_weights, mean_power, ExponentPair, GeneratorSpec, WeightSequence};
use crate::solver::{apply_weighted_mean, operator_norm, SolverOptions};
use crate::sum::{self, NeumaierSum};

/// Largest `N` for the dense bilinear form.
pub const DUALITY_MAX_N: usize = 1000;

fn check_len(w: &WeightSequence, a: &[f64]) -> Result<()> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: a.len(),
        });
    }
    Ok(())
}

/// `Σ_n A_n^p / Σ_n a_n^p` for a nonnegative `a`, `p > 1`.
pub fn hardy_ratio(w: &WeightSequence, e: ExponentPair, a: &[f64]) -> Result<f64> {
    if e.is_negative() {
        return Err(invalid("hardy_ratio needs p > 1"));
    }
    check_len(w, a)?;
    if let Some(i) = a.iter().position(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(invalid(format!(
            "entry {} must be nonnegative and finite",
            i + 1
        )));
    }
    let top = a.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return Err(Error::ZeroSequence);
    }
    let scaled: Vec<f64> = a.iter().map(|x| x / top).collect();
    let p = e.p();
    let big = apply_weighted_mean(w, &scaled)?;
    let lhs = sum::sum(big.iter().map(|y| y.powf(p)));
    let rhs = sum::sum(scaled.iter().map(|y| y.powf(p)));
    Ok(lhs / rhs)
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub a: Vec<f64>,
    pub ratio: f64,
    pub converged: bool,
}

/// Sequence maximizing [`hardy_ratio`], optionally within a monotone cone.
pub fn worst_case_search(
    w: &WeightSequence,
    e: ExponentPair,
    opts: &SolverOptions,
) -> Result<WorstCase> {
    let r = operator_norm(w, e, opts)?;
    Ok(WorstCase {
        a: r.maximizer,
        ratio: r.mu,
        converged: r.converged,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PointwiseCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// The pointwise form behind the Cartlidge bound with `L` the supremum of the
/// ratio differences: `Σ A_n^p ≤ p/(p-L) Σ a_n A_n^{p-1}` for `p > 1`, and
/// the reversed inequality for `p < 0`. `a` must be strictly positive.
pub fn cartlidge_pointwise(
    w: &WeightSequence,
    e: ExponentPair,
    a: &[f64],
) -> Result<PointwiseCheck> {
    check_len(w, a)?;
    if let Some(i) = a.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::NonPositiveEntry {
            index: i + 1,
            value: a[i],
        });
    }
    let p = e.p();
    let l = w.ratio_differences().into_iter().fold(0.0, f64::max);
    let big = apply_weighted_mean(w, a)?;
    let lhs = sum::sum(big.iter().map(|y| y.powf(p)));
    let cross = sum::sum(big.iter().zip(a).map(|(y, x)| x * y.powf(p - 1.0)));
    let rhs = p / (p - l) * cross;
    let tol = 1e-12 * lhs.abs().max(rhs.abs());
    let holds = if p > 1.0 {
        lhs <= rhs + tol
    } else {
        lhs >= rhs - tol
    };
    Ok(PointwiseCheck { lhs, rhs, holds })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Family45Check {
    pub ratio: f64,
    /// `(αp/(αp-1))^p`
    pub target: f64,
    pub in_proven_window: bool,
    pub verdict: Verdict,
}

impl Family45Check {
    pub fn holds(&self) -> bool {
        self.ratio <= self.target * (1.0 + 1e-12)
    }
}

/// Ratio for the weighted mean matrix generated by `L_β^{α-1}(i, i-1)`,
/// compared with `(αp/(αp-1))^p` inside the window
/// `1 ≤ α ≤ 1 + 1/p, α ≤ β ≤ 2`.
pub fn verify_family_45(
    alpha: f64,
    beta: f64,
    e: ExponentPair,
    a: &[f64],
) -> Result<Family45Check> {
    let p = e.p();
    if p <= 1.0 {
        return Err(invalid("the family needs p > 1"));
    }
    if !(alpha >= 1.0 && beta >= alpha) {
        return Err(invalid(format!(
            "need β ≥ α ≥ 1, got α = {alpha}, β = {beta}"
        )));
    }
    let w = make_weights(&GeneratorSpec::mean_power(alpha, beta, a.len()))?;
    let ratio = hardy_ratio(&w, e, a)?;
    let target = (alpha * p / (alpha * p - 1.0)).powf(p);
    let in_proven_window = alpha <= 1.0 + 1.0 / p && beta <= 2.0;
    let holds = ratio <= target * (1.0 + 1e-12);
    Ok(Family45Check {
        ratio,
        target,
        in_proven_window,
        verdict: if in_proven_window {
            Verdict::from_flag(holds)
        } else {
            Verdict::Unproven
        },
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualityCheck {
    pub bilinear: f64,
    /// Same form evaluated as `Σ_n c_n² S_n(x) S_n(y)`.
    pub factorized: f64,
    pub bound: f64,
    pub holds: bool,
    /// `(bound - bilinear)/bound`
    pub slack: f64,
}

/// `Σ_{i,j} α² min(i,j)^{2α-1} x_i y_j / ((2α-1) i^α j^α)` against
/// `α²/(α-1/2)² ||x||_2 ||y||_2` for `1 ≤ α ≤ 3/2`.
pub fn duality_p2_check(alpha: f64, n: usize, x: &[f64], y: &[f64]) -> Result<DualityCheck> {
    if !(1.0..=1.5).contains(&alpha) {
        return Err(invalid(format!("need 1 ≤ α ≤ 3/2, got {alpha}")));
    }
    if n > DUALITY_MAX_N {
        return Err(Error::TooLarge {
            n,
            limit: DUALITY_MAX_N,
        });
    }
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: v.len(),
            });
        }
        if v.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
            return Err(invalid("x and y must be nonnegative and finite"));
        }
    }
    let r = 2.0 * alpha - 1.0;
    let scale = alpha * alpha / r;
    let pw: Vec<f64> = (1..=n).map(|i| (i as f64).powf(alpha)).collect();
    let mut acc = NeumaierSum::new();
    for i in 0..n {
        for j in 0..n {
            let m = (i.min(j) + 1) as f64;
            acc.add(scale * m.powf(r) * x[i] * y[j] / (pw[i] * pw[j]));
        }
    }
    let bilinear = acc.value();

    // c_n = α L_{2α-1}^{α-1}(n, n-1), S_n(x) = Σ_{i≥n} x_i / i^α
    let tail = |v: &[f64]| -> Vec<f64> {
        let terms: Vec<f64> = v.iter().zip(&pw).map(|(t, q)| t / q).collect();
        sum::suffix_sums(&terms)
    };
    let (sx, sy) = (tail(x), tail(y));
    let factorized = sum::sum((1..=n).map(|k| {
        let c = alpha * mean_power(k as f64, (k - 1) as f64, r, alpha - 1.0);
        c * c * sx[k - 1] * sy[k - 1]
    }));

    let norm = |v: &[f64]| sum::sum(v.iter().map(|t| t * t)).sqrt();
    let bound = alpha * alpha / ((alpha - 0.5) * (alpha - 0.5)) * norm(x) * norm(y);
    let holds = bilinear <= bound * (1.0 + 1e-12);
    let slack = if bound > 0.0 {
        (bound - bilinear) / bound
    } else {
        0.0
    };
    Ok(DualityCheck {
        bilinear,
        factorized,
        bound,
        holds,
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{brute_force_norm, MonotoneRestriction};

    fn pair(p: f64) -> ExponentPair {
        ExponentPair::new(p).unwrap()
    }

    #[test]
    fn hardy_ratio_examples() {
        let one = WeightSequence::constant(1).unwrap();
        assert_eq!(hardy_ratio(&one, pair(2.0), &[3.0]).unwrap(), 1.0);
        let w = WeightSequence::constant(100).unwrap();
        let mut e1 = vec![0.0; 100];
        e1[0] = 1.0;
        let basel: f64 = (1..=100).map(|n| 1.0 / (n * n) as f64).sum();
        assert!((hardy_ratio(&w, pair(2.0), &e1).unwrap() - basel).abs() < 1e-14);
        let w = WeightSequence::constant(10_000).unwrap();
        let a: Vec<f64> = (1..=10_000).map(|n| (n as f64).powf(-0.51)).collect();
        let r = hardy_ratio(&w, pair(2.0), &a).unwrap();
        assert!(r > 3.0 && r < 4.0, "{r}");
        assert_eq!(
            hardy_ratio(&one, pair(2.0), &[0.0]),
            Err(Error::ZeroSequence)
        );
        assert!(hardy_ratio(&one, pair(2.0), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn worst_case_matches_oracle() {
        let w = WeightSequence::constant(4).unwrap();
        let opts = SolverOptions::default();
        let r = worst_case_search(&w, pair(2.0), &opts).unwrap();
        let oracle = brute_force_norm(&w, pair(2.0), &opts).unwrap();
        assert!((r.ratio.sqrt() - oracle).abs() < 1e-8);
        let ratio = hardy_ratio(&w, pair(2.0), &r.a).unwrap();
        assert!((ratio - r.ratio).abs() < 1e-12);

        let lin = WeightSequence::power(1.0, 16).unwrap();
        let free = worst_case_search(&lin, pair(2.0), &opts).unwrap();
        let dec = worst_case_search(
            &lin,
            pair(2.0),
            &opts
                .clone()
                .with_restriction(MonotoneRestriction::Decreasing),
        )
        .unwrap();
        assert!((free.ratio - dec.ratio).abs() < 1e-9);

        let r = worst_case_search(&WeightSequence::constant(1).unwrap(), pair(3.0), &opts).unwrap();
        assert_eq!(r.a, vec![1.0]);
        assert!((r.ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pointwise_cartlidge_both_signs() {
        let w = WeightSequence::power(0.5, 12).unwrap();
        let a: Vec<f64> = (1..=12)
            .map(|k| 1.0 + (k as f64 * 1.7).sin().abs())
            .collect();
        assert!(cartlidge_pointwise(&w, pair(-2.0), &a).unwrap().holds);
        assert!(cartlidge_pointwise(&w, pair(2.0), &a).unwrap().holds);
        assert!(cartlidge_pointwise(&w, pair(2.0), &[0.0; 12]).is_err());
    }

    #[test]
    fn family_45_reduces_to_diff_power() {
        let n = 50;
        let a: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
        for &alpha in &[1.0, 1.25, 1.5] {
            let fam = make_weights(&GeneratorSpec::mean_power(alpha, alpha, n)).unwrap();
            let seven = make_weights(&GeneratorSpec::diff_power(alpha, n)).unwrap();
            for (x, y) in fam.lambdas().iter().zip(seven.lambdas()) {
                assert!((alpha * x - y).abs() < 1e-13 * y, "{alpha}");
            }
            let c = verify_family_45(alpha, alpha, pair(2.0), &a).unwrap();
            let r = hardy_ratio(&seven, pair(2.0), &a).unwrap();
            assert!((c.ratio - r).abs() < 1e-13 * r);
        }
    }

    #[test]
    fn family_45_window() {
        let a: Vec<f64> = (1..=10_000).map(|n| (n as f64).powf(-0.51)).collect();
        let c = verify_family_45(1.0, 2.0, pair(2.0), &a).unwrap();
        assert!(c.ratio < 4.0 && c.verdict == Verdict::Pass);
        let c = verify_family_45(1.8, 2.0, pair(1.5), &a[..100]).unwrap();
        assert_eq!(c.verdict, Verdict::Unproven);
        assert!(verify_family_45(1.0, 0.5, pair(2.0), &a).is_err());
        assert!(verify_family_45(0.5, 1.0, pair(2.0), &a).is_err());
    }

    #[test]
    fn family_45_large_beta_is_power_weights() {
        let n = 200;
        let far = make_weights(&GeneratorSpec::mean_power(1.5, 1e3, n)).unwrap();
        for (i, l) in far.lambdas().iter().enumerate() {
            let k = (i + 1) as f64;
            assert!((l / k.sqrt() - 1.0).abs() < 1e-2, "{i}: {l}");
        }
    }

    #[test]
    fn duality_examples() {
        let mut e1 = vec![0.0; 5];
        e1[0] = 1.0;
        let d = duality_p2_check(1.0, 5, &e1, &e1).unwrap();
        assert!((d.bilinear - 1.0).abs() < 1e-15 && d.bound == 4.0 && d.holds);

        let x: Vec<f64> = (1..=100).map(|n| 1.0 / (n as f64).sqrt()).collect();
        let d = duality_p2_check(1.0, 100, &x, &x).unwrap();
        let harmonic: f64 = (1..=100).map(|n| 1.0 / n as f64).sum();
        assert!(d.holds && d.bilinear < 4.0 * harmonic);
        assert!((d.bilinear - d.factorized).abs() < 1e-12 * d.bilinear);

        let y: Vec<f64> = (1..=100).map(|n| ((n * 7 % 11) as f64) / 3.0).collect();
        let d = duality_p2_check(1.3, 100, &x, &y).unwrap();
        assert!(d.holds);
        assert!((d.bilinear - d.factorized).abs() < 1e-12 * d.bilinear);
        assert!(duality_p2_check(1.6, 1, &[1.0], &[1.0]).is_err());
        assert!(matches!(
            duality_p2_check(1.0, 1001, &[], &[]),
            Err(Error::TooLarge { .. })
        ));
    }
}
