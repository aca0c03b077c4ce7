use crate::error::{invalid, Error, Result};
use crate::sequences::{ExponentPair, WeightSequence};
use crate::solver::NonnegativeOperator;

/// Residual of the stationarity system satisfied by a maximizer,
///
/// `μ (a_k^{p-1}/λ_k - a_{k+1}^{p-1}/λ_{k+1}) = A_k^{p-1}/Λ_k` for `k < N`,
/// `μ a_N^{p-1}/λ_N = A_N^{p-1}/Λ_N`.
///
/// For `p > 1`, `a` is rescaled to the unit `l^p` sphere first. For `p < 0`,
/// `a` is read as a point of the simplex (rescaled to `Σ a = 1`) and the
/// system is evaluated at `b = a^{1/p}`. The result is the largest absolute
/// deviation divided by `max_k A_k^{p-1}/Λ_k`, so it is scale free.
pub fn kkt_residual(w: &WeightSequence, e: ExponentPair, a: &[f64], mu: f64) -> Result<f64> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: a.len(),
        });
    }
    if let Some((i, &v)) = a.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NonPositiveEntry {
            index: i + 1,
            value: v,
        });
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(invalid(format!("mu must be positive, got {mu}")));
    }
    let p = e.p();
    let b: Vec<f64> = if e.is_negative() {
        let total: f64 = crate::sum::sum(a.iter().copied());
        a.iter().map(|x| (x / total).powf(1.0 / p)).collect()
    } else {
        normalize_p(a, p)
    };
    Ok(stationarity_residual(w, p, &b, mu))
}

/// `b` must already be normalized (`Σ b^p = 1`).
pub(crate) fn stationarity_residual(w: &WeightSequence, p: f64, b: &[f64], mu: f64) -> f64 {
    let big_a = w.apply(b);
    let n = w.len();
    let t: Vec<f64> = b
        .iter()
        .zip(w.lambdas())
        .map(|(x, lam)| x.powf(p - 1.0) / lam)
        .collect();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for k in 0..n {
        let rhs = big_a[k].powf(p - 1.0) / w.prefix()[k];
        let lhs = if k + 1 < n {
            mu * (t[k] - t[k + 1])
        } else {
            mu * t[k]
        };
        worst = worst.max((lhs - rhs).abs());
        scale = scale.max(rhs.abs());
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

pub(crate) fn normalize_p(a: &[f64], p: f64) -> Vec<f64> {
    let s = crate::sum::sum(a.iter().map(|x| x.powf(p)));
    let f = s.powf(-1.0 / p);
    a.iter().map(|x| x * f).collect()
}
