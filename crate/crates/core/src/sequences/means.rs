//! The two-variable means `L_r(a, b)`: `((a^r - b^r) / (r (a - b)))^(1/(r-1))`
//! for `r ∉ {0, 1}`, the logarithmic mean at `r = 0` and the identric mean at
//! `r = 1`. The family is strictly increasing in `r` for `a ≠ b`.
//!
//! Evaluation is done in log space with `expm1`/`ln_1p`, so large `|r|` and
//! nearly equal arguments neither overflow nor cancel. Close to the removable
//! singularities the first-order expansions in `r` are used.

use crate::error::{invalid, Result};

const NEAR_ZERO_R: f64 = 1e-6;
const NEAR_ONE_R: f64 = 1e-6;
const NEAR_EQUAL: f64 = 1e-8;

/// `L_r(a, b)` for positive `a`, `b`; returns `a` when `a == b`.
pub fn generalized_mean(a: f64, b: f64, r: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(invalid(format!(
            "generalized mean needs positive finite arguments, got ({a}, {b})"
        )));
    }
    if !r.is_finite() {
        return Err(invalid(format!("mean order must be finite, got {r}")));
    }
    Ok(mean_unchecked(a, b, r))
}

pub(crate) fn mean_unchecked(a: f64, b: f64, r: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi - lo <= NEAR_EQUAL * hi {
        // L_r = m (1 + (r - 2)/6 · e² + O(e⁴)), m the arithmetic mean
        let m = 0.5 * (hi + lo);
        let e = (hi - lo) / (hi + lo);
        return m * (1.0 + (r - 2.0) / 6.0 * e * e);
    }
    let diff = hi - lo;
    // ln(lo/hi); ln_1p keeps accuracy when the arguments are close
    let ln_t = if lo > 0.5 * hi {
        (-diff / hi).ln_1p()
    } else {
        lo.ln() - hi.ln()
    };
    if r.abs() < NEAR_ZERO_R {
        // ln L_r = ln L_0 + r (ln L_0 - ln G) + O(r²)
        let log_mean = diff / -ln_t;
        let ln_geo = 0.5 * (hi.ln() + lo.ln());
        let ln_l0 = log_mean.ln();
        return (ln_l0 + r * (ln_l0 - ln_geo)).exp();
    }
    if (r - 1.0).abs() < NEAR_ONE_R {
        // ln L_1 = ln hi + lo·ln(hi/lo)/(hi - lo) - 1
        // d/dr ln L_r at r = 1 is (1 - G²/L_0²)/2
        let d = -ln_t / diff;
        let ln_l1 = hi.ln() + lo * d - 1.0;
        let slope = 0.5 * (1.0 - hi * lo * d * d);
        return (ln_l1 + (r - 1.0) * slope).exp();
    }
    closed_form(hi, lo, ln_t, r)
}

fn closed_form(hi: f64, lo: f64, ln_t: f64, r: f64) -> f64 {
    let ln_ratio = r * hi.ln() + ln_abs_expm1(r * ln_t) - r.abs().ln() - (hi - lo).ln();
    (ln_ratio / (r - 1.0)).exp()
}

// ln|e^x - 1| without overflow for large positive x.
fn ln_abs_expm1(x: f64) -> f64 {
    if x > 0.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        (-x.exp_m1()).ln()
    }
}

/// Continuous extension `L_r(a, 0)` for `a > 0`: `a · r^(-1/(r-1))` for
/// `r > 0` (`a/e` at `r = 1`), zero for `r ≤ 0`.
pub(crate) fn mean_with_zero(a: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let h = r - 1.0;
    let exponent = if h.abs() < 1e-12 {
        // ln(r)/(r-1) → 1 - h/2
        1.0 - 0.5 * h
    } else {
        h.ln_1p() / h
    };
    a * (-exponent).exp()
}

/// `L_r(a, b)^power` allowing `b = 0` (used for generator weights at index 1).
pub(crate) fn mean_power(a: f64, b: f64, r: f64, power: f64) -> f64 {
    if power == 0.0 {
        return 1.0;
    }
    let m = if b == 0.0 {
        mean_with_zero(a, r)
    } else {
        mean_unchecked(a, b, r)
    };
    m.powf(power)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        ((a - b) / b).abs() <= tol
    }

    #[test]
    fn classical_members() {
        assert!(close(generalized_mean(1.0, 2.0, 2.0).unwrap(), 1.5, 1e-15));
        assert!(close(generalized_mean(1.0, 4.0, -1.0).unwrap(), 2.0, 1e-14));
        let log_mean = 1.0 / 2f64.ln();
        assert!(close(
            generalized_mean(1.0, 2.0, 0.0).unwrap(),
            log_mean,
            1e-15
        ));
        // identric mean of 1 and 2: (1/e)·4
        let identric = 4.0 / std::f64::consts::E;
        assert!(close(
            generalized_mean(1.0, 2.0, 1.0).unwrap(),
            identric,
            1e-15
        ));
    }

    #[test]
    fn equal_arguments_return_the_argument() {
        for &r in &[-3.0, 0.0, 0.5, 1.0, 2.0, 40.0] {
            assert_eq!(generalized_mean(3.5, 3.5, r).unwrap(), 3.5);
        }
    }

    #[test]
    fn expansions_match_the_closed_form_near_the_switch() {
        for &(a, b) in &[(2.0f64, 1.0f64), (5.0, 4.0), (7.0, 0.3)] {
            let ln_t = (b / a).ln();
            for &r in &[0.9e-6, -0.9e-6, 1.0 + 0.9e-6, 1.0 - 0.9e-6] {
                let series = generalized_mean(a, b, r).unwrap();
                let direct = closed_form(a, b, ln_t, r);
                // the closed form itself is only good to ~1e-10 next to r = 1
                assert!(close(series, direct, 1e-9), "r={r}: {series} vs {direct}");
            }
            let at = |r: f64| generalized_mean(a, b, r).unwrap();
            assert!(at(-2e-6) < at(-0.5e-6) && at(-0.5e-6) < at(0.0) && at(0.0) < at(0.5e-6));
            assert!(at(1.0 - 2e-6) < at(1.0 - 0.5e-6) && at(1.0 - 0.5e-6) < at(1.0));
            assert!(at(1.0) < at(1.0 + 0.5e-6) && at(1.0 + 0.5e-6) < at(1.0 + 2e-6));
        }
        let x = generalized_mean(1.0, 1.0 + 0.9e-8, 3.0).unwrap();
        let y = generalized_mean(1.0, 1.0 + 1.1e-8, 3.0).unwrap();
        assert!((x - y).abs() < 1e-8);
    }

    #[test]
    fn large_orders_do_not_overflow() {
        // (3^1000 / 1000)^(1/999) up to a factor 1 - (2/3)^1000
        let m = generalized_mean(3.0, 2.0, 1000.0).unwrap();
        let expect = ((1000.0 * 3f64.ln() - 1000f64.ln()) / 999.0).exp();
        assert!(close(m, expect, 1e-13), "{m}");
        let m = generalized_mean(3.0, 2.0, -1000.0).unwrap();
        assert!(m > 2.0 && m < 2.02, "{m}");
    }

    #[test]
    fn zero_endpoint_is_the_limit() {
        for &r in &[0.5, 1.0, 1.5, 2.0, 3.0] {
            let lim = mean_with_zero(2.0, r);
            let near = generalized_mean(2.0, 1e-40, r).unwrap();
            assert!(close(near, lim, 1e-12), "r={r}: {near} vs {lim}");
        }
        assert_eq!(mean_with_zero(2.0, -1.0), 0.0);
    }

    #[test]
    fn rejects_non_positive_arguments() {
        assert!(generalized_mean(0.0, 1.0, 2.0).is_err());
        assert!(generalized_mean(1.0, -1.0, 2.0).is_err());
    }
}
