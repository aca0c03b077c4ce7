//! Per-index verdicts for the sufficient and necessary conditions on the
//! generator `λ`. Every supremum, infimum or limit over `n` is a
//! finite-section value; reports carry the section length they were taken on.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::sequences::{ratio_profile, ExponentPair, ProfileShape, WeightSequence};

/// Slack allowed on non-strict inequalities.
pub const SLACK: f64 = 1e-12;

/// Largest section on which `compare_matrices` checks every pair `k ≤ n`.
pub const EXHAUSTIVE_PREFIX_MAX_N: usize = 200;
const SAMPLED_PREFIX_PAIRS: usize = 20_000;

/// Largest admissible gap between a supplied limit `lim Λ_n/(nλ_n)` and the
/// numeric estimate.
pub const LIMIT_TOL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionId {
    Cartlidge,
    Gao,
    DecreasingDeterminationU,
    DecreasingDeterminationL,
    InfDifference,
    Necessary,
    ConcaveLimit,
    RowsDecreasing,
    CompareMatrices,
    KaluzaSzego,
}

impl ConditionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionId::Cartlidge => "cartlidge",
            ConditionId::Gao => "gao",
            ConditionId::DecreasingDeterminationU => "decreasing_determination_u",
            ConditionId::DecreasingDeterminationL => "decreasing_determination_l",
            ConditionId::InfDifference => "inf_difference",
            ConditionId::Necessary => "necessary",
            ConditionId::ConcaveLimit => "concave_limit",
            ConditionId::RowsDecreasing => "rows_decreasing",
            ConditionId::CompareMatrices => "compare_matrices",
            ConditionId::KaluzaSzego => "kaluza_szego",
        }
    }
}

/// Verdict of one condition on a finite section.
///
/// `first_failure_index` is 1-based and present exactly when `holds` is
/// false. `implied_bound` is a bound on `μ = ||A||^p` and is only filled in
/// when the condition holds and yields one.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    pub holds: bool,
    pub first_failure_index: Option<usize>,
    pub constant: Option<f64>,
    pub implied_bound: Option<f64>,
    pub section_length: usize,
    pub details: BTreeMap<String, Value>,
}

impl ConditionReport {
    pub(crate) fn new(condition_id: ConditionId, section_length: usize) -> Self {
        Self {
            condition_id,
            holds: true,
            first_failure_index: None,
            constant: None,
            implied_bound: None,
            section_length,
            details: BTreeMap::new(),
        }
    }

    pub(crate) fn fail_at(&mut self, index: usize) {
        self.holds = false;
        self.first_failure_index.get_or_insert(index);
        self.implied_bound = None;
    }

    fn detail(&mut self, key: &str, value: impl Into<Value>) {
        self.details.insert(key.to_string(), value.into());
    }
}

/// Direction in which the consecutive differences move over the section.
fn trend(values: &[f64]) -> &'static str {
    let up = values
        .windows(2)
        .any(|w| w[1] > w[0] + SLACK * w[0].abs().max(1.0));
    let down = values
        .windows(2)
        .any(|w| w[1] < w[0] - SLACK * w[0].abs().max(1.0));
    match (up, down) {
        (false, false) => "constant",
        (true, false) => "increasing",
        (false, true) => "decreasing",
        (true, true) => "mixed",
    }
}

/// `L = sup_n (Λ_{n+1}/λ_{n+1} - Λ_n/λ_n)` and the verdict `L < p`. For
/// `p < 0` the bound `(p/(p-L))^p` holds unconditionally.
pub fn cartlidge(w: &WeightSequence, e: ExponentPair) -> ConditionReport {
    let diffs = w.ratio_differences();
    let mut report = ConditionReport::new(ConditionId::Cartlidge, w.len());
    let (argmax, l) =
        diffs
            .iter()
            .copied()
            .enumerate()
            .fold((None, 0.0f64), |(best_i, best), (i, d)| {
                if best_i.is_none() || d > best {
                    (Some(i + 1), d)
                } else {
                    (best_i, best)
                }
            });
    report.constant = Some(l);
    report.detail("argmax", argmax.map_or(Value::Null, |i| json!(i)));
    report.detail("trend", trend(&diffs));
    let p = e.p();
    if p > 1.0 {
        if let Some(i) = diffs.iter().position(|&d| d >= p) {
            report.fail_at(i + 1);
            return report;
        }
    }
    report.implied_bound = Some(e.hardy_bound(l));
    report
}

/// Per-n check of
/// `Λ_{n+1}/λ_{n+1} ≤ Λ_n/λ_n (1 - Lλ_n/(pΛ_n))^{1-p} + L/p` for `n ≤ N-1`.
pub fn gao_condition(w: &WeightSequence, e: ExponentPair, l: f64) -> Result<ConditionReport> {
    let p = e.p();
    let in_range = if p > 1.0 { l > 0.0 && l < p } else { l > 0.0 };
    if !in_range || !l.is_finite() {
        return Err(invalid(format!(
            "constant L = {l} out of range for p = {p}"
        )));
    }
    let ratios = w.ratios();
    let diffs = w.ratio_differences();
    let mut report = ConditionReport::new(ConditionId::Gao, w.len());
    report.constant = Some(l);
    let mut worst = f64::INFINITY;
    let mut worst_at = None;
    for (i, (&r, &d)) in ratios.iter().zip(&diffs).enumerate() {
        // both sides minus Λ_n/λ_n
        let x = l / (p * r);
        let rhs = r * ((1.0 - p) * (-x).ln_1p()).exp_m1() + l / p;
        let slack = (rhs - d) / (r + d);
        if slack < worst {
            worst = slack;
            worst_at = Some(i + 1);
        }
        if slack < -SLACK {
            report.fail_at(i + 1);
        }
    }
    report.detail(
        "min_slack",
        if worst.is_finite() {
            json!(worst)
        } else {
            Value::Null
        },
    );
    report.detail(
        "min_slack_index",
        worst_at.map_or(Value::Null, |i| json!(i)),
    );
    if report.holds {
        report.implied_bound = Some(e.hardy_bound(l));
    }
    Ok(report)
}

/// Which form of the monotone-determination test to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeterminationForm {
    /// `1/Λ_k ≥ U (1/λ_k - 1/λ_{k+1})` with a bound `U ≥ μ`.
    UForm,
    /// `(1 - L/p)^p ≥ Λ_k (1/λ_k - 1/λ_{k+1})` with a Cartlidge constant `L`.
    LForm,
}

/// `Λ_k (1/λ_k - 1/λ_{k+1})` for `k = 1..N-1`.
fn determination_terms(w: &WeightSequence) -> Vec<f64> {
    w.lambdas()
        .windows(2)
        .zip(w.prefix())
        .map(|(l, big)| big * ((l[1] - l[0]) / (l[0] * l[1])))
        .collect()
}

/// Sufficient condition for the norm to be determined on monotone
/// sequences: decreasing ones for `p > 1`, increasing ones (in the power
/// form) for `p < 0`.
pub fn decreasing_determination(
    w: &WeightSequence,
    e: ExponentPair,
    bound: f64,
    form: DeterminationForm,
) -> Result<ConditionReport> {
    let p = e.p();
    let (id, threshold) = match form {
        DeterminationForm::UForm => {
            if !(bound > 0.0 && bound.is_finite()) {
                return Err(invalid(format!(
                    "bound U must be positive and finite, got {bound}"
                )));
            }
            (ConditionId::DecreasingDeterminationU, 1.0 / bound)
        }
        DeterminationForm::LForm => {
            if p < 0.0 {
                return Err(invalid("the L form applies to p > 1 only"));
            }
            if !(bound >= 0.0 && bound < p) {
                return Err(invalid(format!(
                    "constant L must satisfy 0 ≤ L < p, got {bound}"
                )));
            }
            (
                ConditionId::DecreasingDeterminationL,
                (1.0 - bound / p).powf(p),
            )
        }
    };
    let mut report = ConditionReport::new(id, w.len());
    report.constant = Some(bound);
    report.detail("threshold", threshold);
    let terms = determination_terms(w);
    let worst = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    report.detail(
        "max_term",
        if worst.is_finite() {
            json!(worst)
        } else {
            Value::Null
        },
    );
    if let Some(i) = terms.iter().position(|&t| t > threshold * (1.0 + SLACK)) {
        report.fail_at(i + 1);
    }
    report.detail(
        "determined_on",
        if p > 1.0 { "decreasing" } else { "increasing" },
    );
    Ok(report)
}

/// `inf_n (Λ_{n+1}/λ_{n+1} - Λ_n/λ_n)` over the section; `+∞` when `N = 1`.
pub fn inf_difference(w: &WeightSequence) -> f64 {
    w.ratio_differences()
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// The necessary condition `1/λ_1 ≥ μ (1/λ_1 - 1/λ_2)` for determination on
/// decreasing sequences; sufficient as well when `{Λ_n/λ_n}` is convex.
pub fn necessary_condition(w: &WeightSequence, norm_p: f64) -> ConditionReport {
    let mut report = ConditionReport::new(ConditionId::Necessary, w.len());
    report.constant = Some(norm_p);
    let convex = matches!(
        ratio_profile(w).shape,
        ProfileShape::Convex | ProfileShape::Affine
    );
    report.detail("profile_convex", convex);
    report.detail("sufficient", convex);
    if w.len() < 2 {
        report.detail("threshold", Value::Null);
        return report;
    }
    let (l1, l2) = (w.lambdas()[0], w.lambdas()[1]);
    // 1 ≥ μ (1 - λ_1/λ_2)
    let gap = (l2 - l1) / l2;
    let threshold = if gap > 0.0 { 1.0 / gap } else { f64::INFINITY };
    report.detail(
        "threshold",
        if threshold.is_finite() {
            json!(threshold)
        } else {
            Value::Null
        },
    );
    if norm_p * gap > 1.0 + SLACK {
        report.fail_at(1);
    }
    report
}

/// Estimate of `lim Λ_n/(nλ_n)` from the second half of the section, which
/// cancels the constant term of `Λ_n/λ_n ≈ Ln + c`.
pub fn limit_estimate(w: &WeightSequence) -> f64 {
    let r = w.ratios();
    let n = r.len();
    if n < 2 {
        return r.first().copied().unwrap_or(f64::NAN);
    }
    let m = n / 2;
    (r[n - 1] - r[m - 1]) / (n - m) as f64
}

/// `e^{λ_1/λ_2} (1 - L) < 1` together with concavity of `{Λ_n/λ_n}`; these
/// make the `p < 0` supremum determined on an increasing sequence.
pub fn concave_limit_condition(w: &WeightSequence, l: f64) -> Result<ConditionReport> {
    if !(0.0..=1.0).contains(&l) {
        return Err(invalid(format!("limit L must lie in [0, 1], got {l}")));
    }
    if w.len() < 2 {
        return Err(invalid("the concave-limit condition needs N ≥ 2"));
    }
    let estimate = limit_estimate(w);
    if (estimate - l).abs() > LIMIT_TOL {
        return Err(Error::InconsistentLimit {
            supplied: l,
            estimate,
        });
    }
    let mut report = ConditionReport::new(ConditionId::ConcaveLimit, w.len());
    report.constant = Some(l);
    let ratio = w.lambdas()[0] / w.lambdas()[1];
    let lhs = ratio.exp() * (1.0 - l);
    report.detail("lhs", lhs);
    report.detail("lambda_ratio", ratio);
    report.detail("limit_estimate", estimate);
    let profile = ratio_profile(w);
    let concave = matches!(profile.shape, ProfileShape::Concave | ProfileShape::Affine);
    report.detail("profile_concave", concave);
    if !(lhs < 1.0) {
        report.fail_at(1);
    }
    if !concave {
        let second = profile
            .first_difference
            .windows(2)
            .position(|d| d[1] - d[0] > 1e-10);
        report.fail_at(second.map_or(1, |i| i + 1));
    }
    Ok(report)
}

/// Rows of the weighted mean matrix are nonincreasing, i.e. `λ` is.
pub fn rows_decreasing(w: &WeightSequence) -> bool {
    w.lambdas().windows(2).all(|l| l[0] >= l[1])
}

/// Termwise `Λ_n/λ_n ≤ Λ'_n/λ'_n`, plus the implied prefix-ratio inequality
/// `Λ_k/Λ_n ≤ Λ'_k/Λ'_n` for `k ≤ n` (all pairs up to
/// [`EXHAUSTIVE_PREFIX_MAX_N`], a seeded sample beyond).
pub fn compare_matrices(w: &WeightSequence, w2: &WeightSequence) -> Result<ConditionReport> {
    if w.len() != w2.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: w2.len(),
        });
    }
    let n = w.len();
    let mut report = ConditionReport::new(ConditionId::CompareMatrices, n);
    let (r, r2) = (w.ratios(), w2.ratios());
    let mut min_gap = f64::INFINITY;
    for (i, (a, b)) in r.iter().zip(&r2).enumerate() {
        min_gap = min_gap.min(b - a);
        if *a > b * (1.0 + SLACK) {
            report.fail_at(i + 1);
        }
    }
    report.constant = Some(min_gap);

    let (big, big2) = (w.prefix(), w2.prefix());
    let prefix_ok = |k: usize, m: usize| big[k] * big2[m] <= big2[k] * big[m] * (1.0 + SLACK);
    let mut checked = 0usize;
    let mut violation = None;
    if n <= EXHAUSTIVE_PREFIX_MAX_N {
        'outer: for m in 0..n {
            for k in 0..=m {
                checked += 1;
                if !prefix_ok(k, m) {
                    violation = Some((k + 1, m + 1));
                    break 'outer;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for m in 1..n {
            checked += 1;
            if !prefix_ok(m - 1, m) {
                violation = Some((m, m + 1));
                break;
            }
        }
        for _ in 0..SAMPLED_PREFIX_PAIRS {
            if violation.is_some() {
                break;
            }
            let m = rng.random_range(0..n);
            let k = rng.random_range(0..=m);
            checked += 1;
            if !prefix_ok(k, m) {
                violation = Some((k + 1, m + 1));
            }
        }
    }
    report.detail("prefix_pairs_checked", checked);
    report.detail("prefix_exhaustive", n <= EXHAUSTIVE_PREFIX_MAX_N);
    report.detail("prefix_ratio_holds", violation.is_none());
    report.detail(
        "prefix_ratio_violation",
        violation.map_or(Value::Null, |(k, m)| json!([k, m])),
    );
    Ok(report)
}

fn monotone_direction(a: &[f64]) -> Option<bool> {
    let dec = a.windows(2).all(|w| w[0] >= w[1]);
    let inc = a.windows(2).all(|w| w[0] <= w[1]);
    match (dec, inc) {
        (true, _) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

/// Under the prefix hypotheses `Σ_{i≤k} u_i ≤ Σ_{i≤k} v_i` (`k < n`) with
/// equal totals, reports whether `Σ u_i a_i ≤ Σ v_i a_i` for decreasing `a`
/// (`≥` for increasing `a`). Hypothesis failures are errors, distinct from a
/// `false` conclusion.
pub fn majorization_check(u: &[f64], v: &[f64], a: &[f64]) -> Result<bool> {
    if v.len() != u.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    if a.len() != u.len() {
        return Err(Error::LengthMismatch {
            expected: u.len(),
            actual: a.len(),
        });
    }
    if u.iter().chain(v).any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(invalid("u and v must be nonnegative and finite"));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(invalid("a must be finite"));
    }
    let scale = u.iter().chain(v).sum::<f64>().max(f64::MIN_POSITIVE);
    let (mut su, mut sv) = (0.0, 0.0);
    for (i, (x, y)) in u.iter().zip(v).enumerate() {
        su += x;
        sv += y;
        let last = i + 1 == u.len();
        if su > sv + SLACK * scale || (last && (su - sv).abs() > SLACK * scale) {
            return Err(Error::PrefixHypothesis { index: i + 1 });
        }
    }
    let decreasing = monotone_direction(a).ok_or(Error::NotMonotone)?;
    let lhs: f64 = u.iter().zip(a).map(|(x, y)| x * y).sum();
    let rhs: f64 = v.iter().zip(a).map(|(x, y)| x * y).sum();
    let tol = SLACK
        * u.iter()
            .chain(v)
            .zip(a.iter().chain(a))
            .map(|(x, y)| (x * y).abs())
            .sum::<f64>();
    Ok(if decreasing {
        lhs <= rhs + tol
    } else {
        lhs >= rhs - tol
    })
}
