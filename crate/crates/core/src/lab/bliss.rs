use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::special::ln_gamma;
use crate::sum::{self, NeumaierSum};

/// Parameters of the Bliss-type integral inequality; `p = r/(s+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlissParams {
    r: f64,
    s: f64,
    alpha: f64,
}

impl BlissParams {
    /// Requires `r > 1`, `0 < s < r - 1` and `(α + 1) p > 1`.
    pub fn new(r: f64, s: f64, alpha: f64) -> Result<Self> {
        if ![r, s, alpha].iter().all(|x| x.is_finite()) {
            return Err(invalid("Bliss parameters must be finite"));
        }
        if !(r > 1.0 && s > 0.0 && s < r - 1.0) {
            return Err(invalid(format!(
                "need r > 1 and 0 < s < r - 1, got r = {r}, s = {s}"
            )));
        }
        let params = Self { r, s, alpha };
        if (alpha + 1.0) * params.p() <= 1.0 {
            return Err(invalid(format!(
                "need (α + 1) p > 1, got α = {alpha}, p = {}",
                params.p()
            )));
        }
        Ok(params)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.r / (self.s + 1.0)
    }

    pub fn q(&self) -> f64 {
        let p = self.p();
        p / (p - 1.0)
    }
}

/// `K_{r,s,α} = ((r-s-1)(1+αq)^{r-s})^{-1} (sΓ(r/s) / (Γ(1/s)Γ((r-1)/s)))^s`,
/// evaluated through `ln Γ`.
pub fn bliss_constant(params: BlissParams) -> Result<f64> {
    let BlissParams { r, s, alpha } = params;
    let q = params.q();
    let gammas = ln_gamma(r / s)? - ln_gamma(1.0 / s)? - ln_gamma((r - 1.0) / s)?;
    let ln_k = -(r - s - 1.0).ln() - (r - s) * (alpha * q).ln_1p() + s * (s.ln() + gammas);
    Ok(ln_k.exp())
}

/// `s α^r K_{r,s-1,α-1}`, the constant of the discrete inequality; tends to
/// `(αr/(αr-1))^r` as `s → 1⁺`.
pub fn bliss_limit_term(r: f64, s: f64, alpha: f64) -> Result<f64> {
    let k = bliss_constant(BlissParams::new(r, s - 1.0, alpha - 1.0)?)?;
    Ok(s * alpha.powf(r) * k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBlissInput {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub a: Vec<f64>,
}

impl DiscreteBlissInput {
    pub fn new(u: Vec<f64>, v: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        let n = u.len();
        for seq in [&v, &a] {
            if seq.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: seq.len(),
                });
            }
        }
        for seq in [&u, &v, &a] {
            if let Some(i) = seq.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::NonPositiveEntry {
                    index: i + 1,
                    value: seq[i],
                });
            }
        }
        Ok(Self { u, v, a })
    }

    /// `V_1, …, V_N` (with `V_0 = 0` implicit).
    pub fn prefix(&self) -> Vec<f64> {
        sum::prefix_sums(&self.v)
    }
}

/// `V_k^α - V_{k-1}^α` for `k = 1..N`.
fn power_increments(big_v: &[f64], alpha: f64) -> Vec<f64> {
    let mut prev = 0.0;
    big_v
        .iter()
        .map(|&x| {
            let d = if prev == 0.0 {
                x.powf(alpha)
            } else {
                -x.powf(alpha) * (alpha * (prev / x).ln()).exp_m1()
            };
            prev = x;
            d
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteBlissCheck {
    pub hypothesis: bool,
    /// First `m` at which the hypothesis fails.
    pub hypothesis_failure: Option<usize>,
    /// Evaluated only when the hypothesis holds.
    pub conclusion: Option<bool>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    /// `(rhs - lhs)/rhs`
    pub slack: Option<f64>,
}

/// Hypothesis `Σ_{n≤m} u_n V_n^{αr} ≤ V_m^s` for every `m`; when it holds,
/// the conclusion
/// `Σ u_n (Σ_{k≤n} (V_k^α - V_{k-1}^α) a_k)^r ≤ s α^r K_{r,s-1,α-1} (Σ v_n a_n^{r/s})^s`.
pub fn verify_discrete_bliss(
    input: &DiscreteBlissInput,
    r: f64,
    s: f64,
    alpha: f64,
) -> Result<DiscreteBlissCheck> {
    if !(r > s && s > 1.0 && alpha > s / r && alpha <= 1.0) {
        return Err(invalid(format!(
            "need r > s > 1 and s/r < α ≤ 1, got r = {r}, s = {s}, α = {alpha}"
        )));
    }
    let big_v = input.prefix();
    let mut acc = NeumaierSum::new();
    let mut failure = None;
    for (m, (u, v)) in input.u.iter().zip(&big_v).enumerate() {
        acc.add(u * v.powf(alpha * r));
        let bound = v.powf(s);
        if acc.value() > bound * (1.0 + 1e-12) {
            failure = Some(m + 1);
            break;
        }
    }
    if failure.is_some() {
        return Ok(DiscreteBlissCheck {
            hypothesis: false,
            hypothesis_failure: failure,
            conclusion: None,
            lhs: None,
            rhs: None,
            slack: None,
        });
    }
    let inc = power_increments(&big_v, alpha);
    let inner = sum::prefix_sums(
        &inc.iter()
            .zip(&input.a)
            .map(|(d, a)| d * a)
            .collect::<Vec<_>>(),
    );
    let lhs = sum::sum(input.u.iter().zip(&inner).map(|(u, x)| u * x.powf(r)));
    let base = sum::sum(input.v.iter().zip(&input.a).map(|(v, a)| v * a.powf(r / s)));
    let rhs = bliss_limit_term(r, s, alpha)? * base.powf(s);
    Ok(DiscreteBlissCheck {
        hypothesis: true,
        hypothesis_failure: None,
        conclusion: Some(lhs <= rhs * (1.0 + 1e-12)),
        lhs: Some(lhs),
        rhs: Some(rhs),
        slack: Some((rhs - lhs) / rhs),
    })
}

/// `e^{-(α-1)s/α} α^{s-1} s/(s-1) ((s-1)/Γ(1/(s-1)))^{s-1}`; tends to
/// `e^{1/α}` as `s → 1⁺`.
pub fn carleman_type_constant(s: f64, alpha: f64) -> Result<f64> {
    if !(s > 1.0 && alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid(format!(
            "need s > 1 and 0 < α ≤ 1, got s = {s}, α = {alpha}"
        )));
    }
    let h = s - 1.0;
    let ln_c = -(alpha - 1.0) * s / alpha
        + h * alpha.ln()
        + (s / h).ln()
        + h * (h.ln() - ln_gamma(1.0 / h)?);
    Ok(ln_c.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlemanTypeCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub holds: bool,
    /// `(rhs - lhs)/rhs`
    pub slack: f64,
}

/// `Σ (V_n^s - V_{n-1}^s) (Π_{k≤n} a_k^{V_k^α - V_{k-1}^α})^{s/V_n^α} ≤ C(s, α) (Σ v_n a_n)^s`.
pub fn verify_carleman_type(v: &[f64], a: &[f64], s: f64, alpha: f64) -> Result<CarlemanTypeCheck> {
    let constant = carleman_type_constant(s, alpha)?;
    if a.len() != v.len() {
        return Err(Error::LengthMismatch {
            expected: v.len(),
            actual: a.len(),
        });
    }
    for seq in [v, a] {
        if let Some(i) = seq.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::NonPositiveEntry {
                index: i + 1,
                value: seq[i],
            });
        }
    }
    let big_v = sum::prefix_sums(v);
    let inc_alpha = power_increments(&big_v, alpha);
    let inc_s = power_increments(&big_v, s);
    let mut acc = NeumaierSum::new();
    let mut lhs = NeumaierSum::new();
    for n in 0..v.len() {
        acc.add(inc_alpha[n] * a[n].ln());
        lhs.add(inc_s[n] * (s * acc.value() / big_v[n].powf(alpha)).exp());
    }
    let lhs = lhs.value();
    let rhs = constant * sum::sum(v.iter().zip(a).map(|(x, y)| x * y)).powf(s);
    Ok(CarlemanTypeCheck {
        lhs,
        rhs,
        constant,
        holds: lhs <= rhs * (1.0 + 1e-12),
        slack: (rhs - lhs) / rhs,
    })
}
