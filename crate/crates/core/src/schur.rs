//! Schur's test for lower triangular nonnegative matrices, the two
//! certificate constructions for the `(i^α - (i-1)^α)/n^α` family, and the
//! Kaluza–Szegő reduction for weighted mean matrices.
//!
//! A certificate `(A, c, d, U1, U2)` satisfies, for `p > 1`,
//!
//! ```text
//! Σ_i a_{j,i} c_i^{1/p} ≤ U1 d_j^{1/p}     (rows)
//! Σ_j a_{j,i} d_j^{1/q} ≤ U2 c_i^{1/q}     (columns)
//! ```
//!
//! and then `||A||_{p,p} ≤ U1^{1/q} U2^{1/p}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::conditions::{ConditionId, ConditionReport};
use crate::error::{invalid, Error, Result};
use crate::sequences::{ExponentPair, WeightSequence};
use crate::solver::NonnegativeOperator;
use crate::sum::{prefix_sums, suffix_sums, NeumaierSum};

/// Relative slack allowed before a Schur inequality counts as violated.
pub const SCHUR_TOL: f64 = 1e-12;

/// Factor applied to the right side of the strict Kaluza–Szegő inequality.
pub const STRICT_FACTOR: f64 = 1.0 - 1e-12;

/// Entries `a_{j,i}` for `i ≤ j`; zero above the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub enum Entries {
    /// `a_{j,i} = f_i g_j`.
    Separable { f: Vec<f64>, g: Vec<f64> },
    /// Row-major square matrix, lower triangular.
    Dense(Vec<Vec<f64>>),
}

impl Entries {
    fn len(&self) -> usize {
        match self {
            Entries::Separable { f, .. } => f.len(),
            Entries::Dense(rows) => rows.len(),
        }
    }

    /// Entry at row `j`, column `i` (0-based).
    pub fn get(&self, j: usize, i: usize) -> f64 {
        if i > j {
            return 0.0;
        }
        match self {
            Entries::Separable { f, g } => f[i] * g[j],
            Entries::Dense(rows) => rows[j][i],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurCertificate {
    entries: Entries,
    c: Vec<f64>,
    d: Vec<f64>,
    u1: f64,
    u2: f64,
}

fn check_positive(v: &[f64]) -> Result<()> {
    match v.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        Some(i) => Err(Error::NonPositiveEntry {
            index: i + 1,
            value: v[i],
        }),
        None => Ok(()),
    }
}

impl SchurCertificate {
    pub fn new(entries: Entries, c: Vec<f64>, d: Vec<f64>, u1: f64, u2: f64) -> Result<Self> {
        let n = entries.len();
        match &entries {
            Entries::Separable { f, g } => {
                if g.len() != n {
                    return Err(Error::LengthMismatch {
                        expected: n,
                        actual: g.len(),
                    });
                }
                if f.iter().chain(g).any(|&x| !(x >= 0.0 && x.is_finite())) {
                    return Err(invalid(
                        "certificate entries must be nonnegative and finite",
                    ));
                }
            }
            Entries::Dense(rows) => {
                for (j, row) in rows.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::LengthMismatch {
                            expected: n,
                            actual: row.len(),
                        });
                    }
                    if row.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
                        return Err(invalid(
                            "certificate entries must be nonnegative and finite",
                        ));
                    }
                    if row[j + 1..].iter().any(|&x| x != 0.0) {
                        return Err(invalid(format!(
                            "row {} has entries above the diagonal",
                            j + 1
                        )));
                    }
                }
            }
        }
        for v in [&c, &d] {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: v.len(),
                });
            }
        }
        check_positive(&c)?;
        check_positive(&d)?;
        if !(u1 > 0.0 && u2 > 0.0 && u1.is_finite() && u2.is_finite()) {
            return Err(invalid(format!("U1, U2 must be positive, got {u1}, {u2}")));
        }
        Ok(Self {
            entries,
            c,
            d,
            u1,
            u2,
        })
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn u1(&self) -> f64 {
        self.u1
    }

    pub fn u2(&self) -> f64 {
        self.u2
    }

    /// Same certificate with other constants.
    pub fn with_constants(&self, u1: f64, u2: f64) -> Result<Self> {
        Self::new(self.entries.clone(), self.c.clone(), self.d.clone(), u1, u2)
    }

    /// `U1^{1/q} U2^{1/p}`.
    pub fn implied_bound(&self, e: ExponentPair) -> f64 {
        self.u1.powf(1.0 / e.q()) * self.u2.powf(1.0 / e.p())
    }

    /// `Σ_i a_{j,i} x_i` for every row `j`.
    fn row_sums(&self, x: &[f64]) -> Vec<f64> {
        match &self.entries {
            Entries::Separable { f, g } => {
                let fx: Vec<f64> = f.iter().zip(x).map(|(a, b)| a * b).collect();
                prefix_sums(&fx)
                    .iter()
                    .zip(g)
                    .map(|(s, gj)| s * gj)
                    .collect()
            }
            Entries::Dense(rows) => rows
                .par_iter()
                .enumerate()
                .map(|(j, row)| crate::sum::sum(row[..=j].iter().zip(x).map(|(a, b)| a * b)))
                .collect(),
        }
    }

    /// `Σ_j a_{j,i} y_j` for every column `i`.
    fn column_sums(&self, y: &[f64]) -> Vec<f64> {
        match &self.entries {
            Entries::Separable { f, g } => {
                let gy: Vec<f64> = g.iter().zip(y).map(|(a, b)| a * b).collect();
                suffix_sums(&gy)
                    .iter()
                    .zip(f)
                    .map(|(s, fi)| s * fi)
                    .collect()
            }
            Entries::Dense(rows) => {
                let n = rows.len();
                (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let mut acc = NeumaierSum::new();
                        for j in (i..n).rev() {
                            acc.add(rows[j][i] * y[j]);
                        }
                        acc.value()
                    })
                    .collect()
            }
        }
    }
}

impl NonnegativeOperator for SchurCertificate {
    fn dim(&self) -> usize {
        self.len()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.row_sums(x)
    }

    fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        self.column_sums(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SchurReport {
    pub holds: bool,
    /// Certified upper bound on `||A||_{p,p}`.
    pub bound: f64,
    /// Largest `(lhs - rhs)/rhs` over the row family; positive means violated.
    pub worst_row_slack: f64,
    pub worst_row_index: usize,
    pub worst_col_slack: f64,
    pub worst_col_index: usize,
}

fn worst(lhs: &[f64], rhs: &[f64]) -> (f64, usize) {
    let slacks: Vec<f64> = lhs.par_iter().zip(rhs).map(|(l, r)| (l - r) / r).collect();
    slacks
        .iter()
        .enumerate()
        .fold((f64::NEG_INFINITY, 0), |(w, wi), (i, &s)| {
            if s > w || s.is_nan() {
                (s, i + 1)
            } else {
                (w, wi)
            }
        })
}

/// Checks both families of Schur inequalities. Indices in the report are
/// 1-based.
pub fn verify_schur(cert: &SchurCertificate, e: ExponentPair) -> Result<SchurReport> {
    if e.p() <= 1.0 {
        return Err(invalid("Schur's test needs p > 1"));
    }
    check_positive(&cert.c)?;
    check_positive(&cert.d)?;
    let (p, q) = (e.p(), e.q());
    let cp: Vec<f64> = cert.c.iter().map(|x| x.powf(1.0 / p)).collect();
    let dq: Vec<f64> = cert.d.iter().map(|x| x.powf(1.0 / q)).collect();
    let rows = cert.row_sums(&cp);
    let row_rhs: Vec<f64> = cert.d.iter().map(|x| cert.u1 * x.powf(1.0 / p)).collect();
    let cols = cert.column_sums(&dq);
    let col_rhs: Vec<f64> = cert.c.iter().map(|x| cert.u2 * x.powf(1.0 / q)).collect();
    let (worst_row_slack, worst_row_index) = worst(&rows, &row_rhs);
    let (worst_col_slack, worst_col_index) = worst(&cols, &col_rhs);
    Ok(SchurReport {
        holds: worst_row_slack <= SCHUR_TOL && worst_col_slack <= SCHUR_TOL,
        bound: cert.implied_bound(e),
        worst_row_slack,
        worst_row_index,
        worst_col_slack,
        worst_col_index,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVariant {
    Bennett,
    Improved,
}

impl CertificateVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            CertificateVariant::Bennett => "bennett",
            CertificateVariant::Improved => "improved",
        }
    }
}

/// `∫_{i-1}^{i} x^s dx` for an integer `i ≥ 1`, without cancellation.
pub fn unit_integral(s: f64, i: usize) -> Result<f64> {
    let t = s + 1.0;
    if i == 0 {
        return Err(invalid("interval index starts at 1"));
    }
    if i == 1 {
        return if t > 0.0 {
            Ok(1.0 / t)
        } else {
            Err(invalid(format!("∫_0^1 x^{s} dx diverges")))
        };
    }
    let x = i as f64;
    let step = (-1.0 / x).ln_1p();
    if t == 0.0 {
        return Ok(-step);
    }
    Ok(x.powf(t) * -(t * step).exp_m1() / t)
}

fn check_variant_range(variant: CertificateVariant, alpha: f64, e: ExponentPair) -> Result<()> {
    let p = e.p();
    if p <= 1.0 || !alpha.is_finite() {
        return Err(invalid("certificates need p > 1 and finite α"));
    }
    if alpha * p <= 1.0 {
        return Err(invalid(format!("need αp > 1, got α = {alpha}, p = {p}")));
    }
    if variant == CertificateVariant::Improved && !(1.0..=1.0 + 1.0 / p).contains(&alpha) {
        return Err(invalid(format!(
            "the improved certificate needs 1 ≤ α ≤ 1 + 1/p, got {alpha}"
        )));
    }
    Ok(())
}

/// Certificate for the matrix with rows `a_{j,i} = α (...)_i / j^α` and
/// `U1 = U2 = αp/(αp - 1)`.
pub fn build_certificate(
    variant: CertificateVariant,
    alpha: f64,
    e: ExponentPair,
    n: usize,
) -> Result<SchurCertificate> {
    check_variant_range(variant, alpha, e)?;
    if n == 0 {
        return Err(invalid("certificate size must be positive"));
    }
    let (p, q) = (e.p(), e.q());
    let s = alpha - 1.0 / p;
    let mut f = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for i in 1..=n {
        let lower = unit_integral(s - 1.0, i)?;
        match variant {
            CertificateVariant::Bennett => {
                let upper = unit_integral(s, i)?;
                f.push(alpha * upper.powf(1.0 / p) * lower.powf(1.0 / q));
                c.push(lower / upper);
            }
            CertificateVariant::Improved => {
                let mid = i as f64 - 0.5;
                f.push(alpha * mid.powf(s / p) * lower.powf(1.0 / q));
                c.push(mid.powf(-s) * lower);
            }
        }
    }
    let g: Vec<f64> = (1..=n).map(|j| (j as f64).powf(-alpha)).collect();
    let d: Vec<f64> = (1..=n).map(|j| 1.0 / j as f64).collect();
    let u = alpha * p / (alpha * p - 1.0);
    SchurCertificate::new(Entries::Separable { f, g }, c, d, u, u)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowSumEstimate {
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
    /// Improved variant only: `j^{-α-1/q} ≤ ∫_{j-1/2}^{j+1/2} x^{-α-1/q} dx`
    /// for every `j` in the sum.
    pub hadamard_holds: Option<bool>,
    pub hadamard_first_failure: Option<usize>,
}

/// `∫_{j-1/2}^{j+1/2} x^{-α-1/q} dx`.
fn midpoint_integral(alpha: f64, q: f64, j: usize) -> f64 {
    let t = alpha - 1.0 + 1.0 / q;
    let a = j as f64 - 0.5;
    a.powf(-t) * -(-t * (1.0 / a).ln_1p()).exp_m1() / t
}

/// The column sum behind each construction at column `i`:
/// `Σ_{j=i}^N ∫_{i-1}^i x^{α-1/p} dx / j^{α+1/q}` against `1/(α - 1/p)`
/// (Bennett), or `Σ_{j=i}^N α (i-1/2)^{α-1+1/q} / j^{α+1/q}` against
/// `αp/(αp - 1)` (improved).
pub fn row_sum_estimate(
    variant: CertificateVariant,
    alpha: f64,
    e: ExponentPair,
    i: usize,
    n: usize,
) -> Result<RowSumEstimate> {
    check_variant_range(variant, alpha, e)?;
    if i == 0 || i > n {
        return Err(invalid(format!("need 1 ≤ i ≤ N, got i = {i}, N = {n}")));
    }
    let (p, q) = (e.p(), e.q());
    let exponent = alpha + 1.0 / q;
    let mut acc = NeumaierSum::new();
    for j in (i..=n).rev() {
        acc.add((j as f64).powf(-exponent));
    }
    let tail = acc.value();
    let (value, bound) = match variant {
        CertificateVariant::Bennett => (
            unit_integral(alpha - 1.0 / p, i)? * tail,
            1.0 / (alpha - 1.0 / p),
        ),
        CertificateVariant::Improved => {
            let mid = i as f64 - 0.5;
            (
                alpha * mid.powf(alpha - 1.0 + 1.0 / q) * tail,
                alpha * p / (alpha * p - 1.0),
            )
        }
    };
    let (hadamard_holds, hadamard_first_failure) = match variant {
        CertificateVariant::Bennett => (None, None),
        CertificateVariant::Improved => {
            let fail = (i..=n).find(|&j| {
                (j as f64).powf(-exponent) > midpoint_integral(alpha, q, j) * (1.0 + SCHUR_TOL)
            });
            (Some(fail.is_none()), fail)
        }
    };
    Ok(RowSumEstimate {
        value,
        bound,
        holds: value <= bound * (1.0 + SCHUR_TOL),
        hadamard_holds,
        hadamard_first_failure,
    })
}

/// The three terms of
/// `i^α - (i-1)^α ≤ α(i-1/2)^{α-1} ≤ α(i-1/2)^{(α-1/p)/p} (∫_{i-1}^i x^{α-1-1/p} dx)^{1/q}`.
pub fn mean_chain(alpha: f64, e: ExponentPair, i: usize) -> Result<[f64; 3]> {
    check_variant_range(CertificateVariant::Improved, alpha, e)?;
    let (p, q) = (e.p(), e.q());
    let x = i as f64;
    let mid = x - 0.5;
    let diff = if i == 1 {
        1.0
    } else {
        -x.powf(alpha) * (alpha * (-1.0 / x).ln_1p()).exp_m1()
    };
    let s = alpha - 1.0 / p;
    let improved = alpha * mid.powf(s / p) * unit_integral(s - 1.0, i)?.powf(1.0 / q);
    Ok([diff, alpha * mid.powf(alpha - 1.0), improved])
}

/// Auxiliary sequence `w` and constant `U2` of the Kaluza–Szegő method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuxSequence {
    w: Vec<f64>,
    u2: f64,
}

impl AuxSequence {
    pub fn new(w: Vec<f64>, u2: f64) -> Result<Self> {
        check_positive(&w)?;
        if !(u2 > 0.0 && u2.is_finite()) {
            return Err(invalid(format!("U2 must be positive, got {u2}")));
        }
        Ok(Self { w, u2 })
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn u2(&self) -> f64 {
        self.u2
    }
}

/// Schur certificate of the reduction: `a_{j,i} = λ_i/Λ_j`,
/// `c_i = (w_i/λ_i)^p`, `d_j = (Σ_{k≤j} w_k / Λ_j)^p`, `U1 = 1`.
pub fn kaluza_szego_certificate(
    lambda: &WeightSequence,
    e: ExponentPair,
    aux: &AuxSequence,
) -> Result<SchurCertificate> {
    let n = lambda.len();
    if aux.w.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: aux.w.len(),
        });
    }
    let p = e.p();
    let big_w = prefix_sums(&aux.w);
    let c = aux
        .w
        .iter()
        .zip(lambda.lambdas())
        .map(|(w, l)| (w / l).powf(p))
        .collect();
    let d = big_w
        .iter()
        .zip(lambda.prefix())
        .map(|(w, l)| (w / l).powf(p))
        .collect();
    let g = lambda.prefix().iter().map(|l| 1.0 / l).collect();
    SchurCertificate::new(
        Entries::Separable {
            f: lambda.lambdas().to_vec(),
            g,
        },
        c,
        d,
        1.0,
        aux.u2,
    )
}

/// Strict per-n inequality
/// `(w_1+…+w_n)^{p-1} < U2 Λ_n^p (w_n^{p-1}/λ_n^p - w_{n+1}^{p-1}/λ_{n+1}^p)`
/// for `n ≤ N-1`, plus the column inequalities it telescopes into, summed
/// directly. On success `μ ≤ U2`.
pub fn kaluza_szego_check(
    lambda: &WeightSequence,
    e: ExponentPair,
    aux: &AuxSequence,
) -> Result<ConditionReport> {
    let p = e.p();
    if p <= 1.0 {
        return Err(invalid("the Kaluza–Szegő reduction needs p > 1"));
    }
    let n = lambda.len();
    if aux.w.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: aux.w.len(),
        });
    }
    let lam = lambda.lambdas();
    // ln(w_n^{p-1}/λ_n^p)
    let ln_t: Vec<f64> = aux
        .w
        .iter()
        .zip(lam)
        .map(|(w, l)| (p - 1.0) * w.ln() - p * l.ln())
        .collect();
    for k in 0..n.saturating_sub(1) {
        let step = (p - 1.0) * (aux.w[k + 1] / aux.w[k]).ln() - p * (lam[k + 1] / lam[k]).ln();
        if step > 0.0 {
            return Err(Error::AuxInvariant { index: k + 1 });
        }
    }
    let big_w = prefix_sums(&aux.w);
    let mut report = ConditionReport::new(ConditionId::KaluzaSzego, n);
    report.constant = Some(aux.u2);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..n.saturating_sub(1) {
        let lhs = (p - 1.0) * big_w[k].ln();
        // ln of U2 Λ^p t_k (1 - t_{k+1}/t_k)
        let drop = -(ln_t[k + 1] - ln_t[k]).exp_m1();
        let rhs = aux.u2.ln() + p * lambda.prefix()[k].ln() + ln_t[k] + drop.ln();
        let ratio = (lhs - rhs).exp();
        worst = worst.max(ratio);
        if !(ratio < STRICT_FACTOR) {
            report.fail_at(k + 1);
        }
    }
    report.details.insert(
        "max_lhs_over_rhs".into(),
        if worst.is_finite() {
            json!(worst)
        } else {
            serde_json::Value::Null
        },
    );
    let cert = kaluza_szego_certificate(lambda, e, aux)?;
    let direct = verify_schur(&cert, e)?;
    report
        .details
        .insert("direct_holds".into(), json!(direct.holds));
    report.details.insert(
        "direct_worst_col_slack".into(),
        json!(direct.worst_col_slack),
    );
    report.details.insert(
        "direct_worst_col_index".into(),
        json!(direct.worst_col_index),
    );
    report
        .details
        .insert("identity_row_slack".into(), json!(direct.worst_row_slack));
    if !direct.holds {
        report.fail_at(direct.worst_col_index);
    }
    if report.holds {
        report.implied_bound = Some(aux.u2);
    }
    Ok(report)
}

/// Serializable description of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateSpec {
    Construction {
        variant: CertificateVariant,
        alpha: f64,
        p: f64,
        n: usize,
    },
    Explicit {
        entries: Vec<Vec<f64>>,
        c: Vec<f64>,
        d: Vec<f64>,
        u1: f64,
        u2: f64,
    },
}

impl CertificateSpec {
    pub fn build(&self) -> Result<SchurCertificate> {
        match self {
            CertificateSpec::Construction {
                variant,
                alpha,
                p,
                n,
            } => build_certificate(*variant, *alpha, ExponentPair::new(*p)?, *n),
            CertificateSpec::Explicit {
                entries,
                c,
                d,
                u1,
                u2,
            } => SchurCertificate::new(
                Entries::Dense(entries.clone()),
                c.clone(),
                d.clone(),
                *u1,
                *u2,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{operator_norm, operator_norm_of, SolverOptions};

    fn pair(p: f64) -> ExponentPair {
        ExponentPair::new(p).unwrap()
    }

    #[test]
    fn trivial_certificate() {
        let cert = SchurCertificate::new(
            Entries::Dense(vec![vec![1.0]]),
            vec![1.0],
            vec![1.0],
            1.0,
            1.0,
        )
        .unwrap();
        let r = verify_schur(&cert, pair(2.0)).unwrap();
        assert!(r.holds);
        assert_eq!(r.bound, 1.0);
    }

    #[test]
    fn rejects_bad_certificates() {
        let dense = |rows| Entries::Dense(rows);
        assert!(
            SchurCertificate::new(dense(vec![vec![1.0]]), vec![0.0], vec![1.0], 1.0, 1.0).is_err()
        );
        assert!(SchurCertificate::new(
            dense(vec![vec![1.0, 1.0], vec![1.0, 1.0]]),
            vec![1.0; 2],
            vec![1.0; 2],
            1.0,
            1.0
        )
        .is_err());
        let cert = build_certificate(CertificateVariant::Bennett, 1.0, pair(2.0), 4).unwrap();
        assert!(verify_schur(&cert, pair(-1.0)).is_err());
    }

    #[test]
    fn unit_integrals() {
        assert!((unit_integral(0.5, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((unit_integral(-0.5, 1).unwrap() - 2.0).abs() < 1e-15);
        assert!(unit_integral(-1.0, 1).is_err());
        assert!((unit_integral(-1.0, 3).unwrap() - 1.5f64.ln()).abs() < 1e-15);
        let direct = (1e6f64.powf(0.3) - (1e6f64 - 1.0).powf(0.3)) / 0.3;
        assert!((unit_integral(-0.7, 1_000_000).unwrap() - direct).abs() / direct < 1e-9);
    }

    #[test]
    fn bennett_first_column() {
        let cert = build_certificate(CertificateVariant::Bennett, 1.0, pair(2.0), 5).unwrap();
        for j in 0..5 {
            let expect = (4.0f64 / 3.0).sqrt() / (j + 1) as f64;
            assert!((cert.entries().get(j, 0) - expect).abs() < 1e-15);
            assert_eq!(cert.d()[j], 1.0 / (j + 1) as f64);
        }
        assert!((cert.c()[0] - 3.0).abs() < 1e-15);
        assert_eq!(cert.entries().get(0, 1), 0.0);
    }

    #[test]
    fn improved_first_column() {
        let cert = build_certificate(CertificateVariant::Improved, 1.0, pair(2.0), 3).unwrap();
        let expect = 0.5f64.powf(0.25) * 2f64.sqrt();
        assert!((cert.entries().get(2, 0) - expect / 3.0).abs() < 1e-15);
    }

    #[test]
    fn bennett_verifies_with_bound_two() {
        let cert = build_certificate(CertificateVariant::Bennett, 1.0, pair(2.0), 100).unwrap();
        let r = verify_schur(&cert, pair(2.0)).unwrap();
        assert!(r.holds, "{r:?}");
        assert!((r.bound - 2.0).abs() < 1e-15);
        assert!(r.worst_row_slack.abs() < 1e-13);

        let halved = cert.with_constants(cert.u1(), cert.u2() / 2.0).unwrap();
        let r = verify_schur(&halved, pair(2.0)).unwrap();
        assert!(!r.holds && r.worst_col_slack > 0.0);
    }

    #[test]
    fn constructions_verify_on_a_grid() {
        for &p in &[1.5, 2.0, 3.0] {
            for &alpha in &[0.6, 1.0, 1.2, 1.5] {
                for variant in [CertificateVariant::Bennett, CertificateVariant::Improved] {
                    let Ok(cert) = build_certificate(variant, alpha, pair(p), 500) else {
                        continue;
                    };
                    let r = verify_schur(&cert, pair(p)).unwrap();
                    assert!(r.holds, "{variant:?} α={alpha} p={p}: {r:?}");
                    assert!(r.worst_row_slack.abs() < 1e-13);
                    assert!((r.bound - alpha * p / (alpha * p - 1.0)).abs() < 1e-13);
                }
            }
        }
        assert!(build_certificate(CertificateVariant::Bennett, 0.4, pair(2.0), 4).is_err());
        assert!(build_certificate(CertificateVariant::Improved, 1.6, pair(2.0), 4).is_err());
    }

    #[test]
    fn certificate_bound_dominates_solver() {
        let opts = SolverOptions::default();
        for variant in [CertificateVariant::Bennett, CertificateVariant::Improved] {
            let cert = build_certificate(variant, 1.2, pair(2.0), 64).unwrap();
            let bound = verify_schur(&cert, pair(2.0)).unwrap().bound;
            let norm = operator_norm_of(&cert, pair(2.0), &opts).unwrap().norm;
            assert!(norm <= bound, "{norm} > {bound}");
        }
    }

    #[test]
    fn row_sums_at_the_first_column() {
        let zeta_partial = {
            let mut acc = NeumaierSum::new();
            for j in (1..=10_000usize).rev() {
                acc.add((j as f64).powf(-1.5));
            }
            acc.value()
        };
        let b = row_sum_estimate(CertificateVariant::Bennett, 1.0, pair(2.0), 1, 10_000).unwrap();
        assert!((b.value - 2.0 / 3.0 * zeta_partial).abs() < 1e-14);
        assert!(b.holds && b.bound == 2.0 && b.hadamard_holds.is_none());
        let m = row_sum_estimate(CertificateVariant::Improved, 1.0, pair(2.0), 1, 10_000).unwrap();
        assert!((m.value - 0.5f64.sqrt() * zeta_partial).abs() < 1e-14);
        assert_eq!(m.hadamard_holds, Some(true));
        assert!(m.holds && (m.bound - 2.0).abs() < 1e-15);
        assert!(row_sum_estimate(CertificateVariant::Bennett, 0.5, pair(2.0), 1, 10).is_err());
        assert!(row_sum_estimate(CertificateVariant::Bennett, 1.0, pair(2.0), 11, 10).is_err());
    }

    #[test]
    fn mean_chain_is_ordered() {
        for &p in &[1.5, 2.0, 4.0] {
            let e = pair(p);
            for k in 0..=10 {
                let alpha = 1.0 + k as f64 / 10.0 / p;
                for i in [1usize, 2, 3, 10, 1000] {
                    let [a, b, c] = mean_chain(alpha, e, i).unwrap();
                    assert!(
                        a <= b * (1.0 + 1e-14) && b <= c * (1.0 + 1e-14),
                        "{alpha} {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn kaluza_szego_hardy() {
        let n = 10_000;
        let w = WeightSequence::constant(n).unwrap();
        let aux = AuxSequence::new((1..=n).map(|k| (k as f64).powf(-0.5)).collect(), 4.0).unwrap();
        let r = kaluza_szego_check(&w, pair(2.0), &aux).unwrap();
        assert!(r.holds, "{:?}", r.details);
        assert_eq!(r.implied_bound, Some(4.0));
        let mu = operator_norm(
            &w.truncate(64).unwrap(),
            pair(2.0),
            &SolverOptions::default(),
        )
        .unwrap()
        .mu;
        assert!(mu <= 4.0);
    }

    #[test]
    fn kaluza_szego_failures() {
        let w = WeightSequence::constant(20).unwrap();
        let flat = AuxSequence::new(vec![1.0; 20], 4.0).unwrap();
        let r = kaluza_szego_check(&w, pair(2.0), &flat).unwrap();
        assert!(!r.holds && r.first_failure_index == Some(1));
        let rising = AuxSequence::new((1..=20).map(|k| k as f64).collect(), 4.0).unwrap();
        assert_eq!(
            kaluza_szego_check(&w, pair(2.0), &rising).unwrap_err(),
            Error::AuxInvariant { index: 1 }
        );
        let one = AuxSequence::new(vec![1.0], 4.0).unwrap();
        let r = kaluza_szego_check(&w.truncate(1).unwrap(), pair(2.0), &one).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn spec_round_trip() {
        let spec = CertificateSpec::Construction {
            variant: CertificateVariant::Improved,
            alpha: 1.2,
            p: 2.0,
            n: 10,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"construction\""));
        let back: CertificateSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.build().unwrap().len(), 10);
        let explicit: CertificateSpec = serde_json::from_str(
            r#"{"kind":"explicit","entries":[[1.0]],"c":[1.0],"d":[1.0],"u1":1.0,"u2":1.0}"#,
        )
        .unwrap();
        assert!(
            verify_schur(&explicit.build().unwrap(), pair(3.0))
                .unwrap()
                .holds
        );
    }
}
