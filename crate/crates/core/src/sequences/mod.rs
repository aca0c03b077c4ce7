//! Generator weights `λ_n`, their prefix sums `Λ_n`, exponent pairs and the
//! generalized means used to build several of the weight families.

mod means;
mod profile;

pub use means::generalized_mean;
pub(crate) use means::mean_power;
pub use profile::{ratio_profile, ProfileShape, RatioProfile};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sum;

/// Positive generator weights `λ_1..λ_N` with cached compensated prefix sums.
///
/// The weighted mean matrix generated by these weights has entries
/// `λ_k / Λ_n` for `k ≤ n` and zero above the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSequence {
    lambdas: Vec<f64>,
    prefix: Vec<f64>,
}

impl WeightSequence {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(invalid("weight sequence must have at least one entry"));
        }
        if let Some((index, &value)) = lambdas
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NonPositiveWeight {
                index: index + 1,
                value,
            });
        }
        let prefix = sum::prefix_sums(&lambdas);
        Ok(Self { lambdas, prefix })
    }

    pub fn constant(n: usize) -> Result<Self> {
        make_weights(&GeneratorSpec::constant(n))
    }

    /// `λ_n = n^alpha`.
    pub fn power(alpha: f64, n: usize) -> Result<Self> {
        make_weights(&GeneratorSpec::power(alpha, n))
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    /// Leading section of length `n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(invalid(format!(
                "section length {n} outside 1..={}",
                self.len()
            )));
        }
        Ok(Self {
            lambdas: self.lambdas[..n].to_vec(),
            prefix: self.prefix[..n].to_vec(),
        })
    }

    /// `Λ_n / λ_n` for every n.
    pub fn ratios(&self) -> Vec<f64> {
        self.prefix
            .iter()
            .zip(&self.lambdas)
            .map(|(big, small)| big / small)
            .collect()
    }

    /// `Λ_{n+1}/λ_{n+1} - Λ_n/λ_n` for `n = 1..N-1`, evaluated as
    /// `1 + Λ_n (λ_n - λ_{n+1}) / (λ_n λ_{n+1})` so that slowly varying
    /// weights do not lose the difference to rounding.
    pub fn ratio_differences(&self) -> Vec<f64> {
        self.lambdas
            .windows(2)
            .zip(&self.prefix)
            .map(|(w, big)| 1.0 + big * ((w[0] - w[1]) / (w[0] * w[1])))
            .collect()
    }
}

/// Hölder pair `(p, q)` with `1/p + 1/q = 1`; `p > 1` or `p < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    p: f64,
    q: f64,
}

impl ExponentPair {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || (0.0..=1.0).contains(&p) {
            return Err(invalid(format!(
                "exponent p must satisfy p > 1 or p < 0, got {p}"
            )));
        }
        Ok(Self {
            p,
            q: p / (p - 1.0),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_negative(&self) -> bool {
        self.p < 0.0
    }

    /// `(p / (p - L))^p`, the bound on `μ` implied by a Cartlidge or Gao
    /// constant `L`.
    pub fn hardy_bound(&self, l: f64) -> f64 {
        (self.p / (self.p - l)).powf(self.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `λ_n = 1`
    Constant,
    /// `λ_n = n^α`
    Power,
    /// `λ_n = n^α - (n-1)^α`
    DiffPower,
    /// `λ_n = L_β(n, n-1)^(α-1)`
    MeanPower,
    /// `λ'_1 = 1`, `Λ'_n/λ'_n = (n + α/2)/α` for `n ≥ 2`
    ReferencePrime,
    /// caller-provided values
    Explicit,
}

/// Serializable description of a weight family, `{kind, alpha?, beta?, n, values?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Section length; may be left out of sweep templates, which set it per cell.
    #[serde(default)]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl GeneratorSpec {
    fn with(kind: GeneratorKind, alpha: Option<f64>, beta: Option<f64>, n: usize) -> Self {
        Self {
            kind,
            alpha,
            beta,
            n,
            values: None,
        }
    }

    pub fn constant(n: usize) -> Self {
        Self::with(GeneratorKind::Constant, None, None, n)
    }

    pub fn power(alpha: f64, n: usize) -> Self {
        Self::with(GeneratorKind::Power, Some(alpha), None, n)
    }

    pub fn diff_power(alpha: f64, n: usize) -> Self {
        Self::with(GeneratorKind::DiffPower, Some(alpha), None, n)
    }

    pub fn mean_power(alpha: f64, beta: f64, n: usize) -> Self {
        Self::with(GeneratorKind::MeanPower, Some(alpha), Some(beta), n)
    }

    pub fn reference_prime(alpha: f64, n: usize) -> Self {
        Self::with(GeneratorKind::ReferencePrime, Some(alpha), None, n)
    }

    pub fn explicit(values: Vec<f64>) -> Self {
        Self {
            kind: GeneratorKind::Explicit,
            alpha: None,
            beta: None,
            n: values.len(),
            values: Some(values),
        }
    }

    /// Short human-readable label, e.g. `power(0.5)`.
    pub fn label(&self) -> String {
        let name = match self.kind {
            GeneratorKind::Constant => "constant",
            GeneratorKind::Power => "power",
            GeneratorKind::DiffPower => "diff_power",
            GeneratorKind::MeanPower => "mean_power",
            GeneratorKind::ReferencePrime => "reference_prime",
            GeneratorKind::Explicit => "explicit",
        };
        match (self.alpha, self.beta) {
            (Some(a), Some(b)) => format!("{name}({a},{b})"),
            (Some(a), None) => format!("{name}({a})"),
            _ => name.to_string(),
        }
    }

    fn alpha(&self) -> Result<f64> {
        match self.alpha {
            Some(a) if a.is_finite() => Ok(a),
            _ => Err(invalid(format!(
                "{:?} generator needs a finite alpha",
                self.kind
            ))),
        }
    }
}

/// Builds the weights described by `spec`.
pub fn make_weights(spec: &GeneratorSpec) -> Result<WeightSequence> {
    let n = spec.n;
    if n == 0 {
        return Err(invalid("generator length n must be at least 1"));
    }
    let idx = |i: usize| i as f64;
    let lambdas: Vec<f64> = match spec.kind {
        GeneratorKind::Constant => vec![1.0; n],
        GeneratorKind::Power => {
            let a = spec.alpha()?;
            (1..=n).map(|i| idx(i).powf(a)).collect()
        }
        GeneratorKind::DiffPower => {
            let a = spec.alpha()?;
            // n^α (1 - (1 - 1/n)^α) without cancellation
            (1..=n)
                .map(|i| {
                    let x = idx(i);
                    -x.powf(a) * (a * (-1.0 / x).ln_1p()).exp_m1()
                })
                .collect()
        }
        GeneratorKind::MeanPower => {
            let a = spec.alpha()?;
            let b = spec
                .beta
                .filter(|b| b.is_finite())
                .ok_or_else(|| invalid("mean_power generator needs a finite beta"))?;
            if !(b >= a && a >= 1.0) {
                return Err(invalid(format!(
                    "mean_power requires beta >= alpha >= 1, got alpha={a}, beta={b}"
                )));
            }
            (1..=n)
                .map(|i| mean_power(idx(i), idx(i - 1), b, a - 1.0))
                .collect()
        }
        GeneratorKind::ReferencePrime => {
            let a = spec.alpha()?;
            if !(a > 1.0 && a < 2.0) {
                return Err(invalid(format!(
                    "reference_prime requires 1 < alpha < 2, got {a}"
                )));
            }
            let mut out = Vec::with_capacity(n);
            let mut acc = sum::NeumaierSum::new();
            for i in 1..=n {
                let lam = if i == 1 {
                    1.0
                } else {
                    // Λ'_n = λ'_n (n + α/2)/α and Λ'_n = Λ'_{n-1} + λ'_n
                    acc.value() * a / (idx(i) - 0.5 * a)
                };
                acc.add(lam);
                out.push(lam);
            }
            out
        }
        GeneratorKind::Explicit => {
            let values = spec
                .values
                .clone()
                .ok_or_else(|| invalid("explicit generator needs values"))?;
            if values.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: values.len(),
                });
            }
            values
        }
    };
    WeightSequence::new(lambdas)
}
