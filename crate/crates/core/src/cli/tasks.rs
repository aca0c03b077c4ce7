use serde_json::{json, Value};

use super::{Cell, Row, SweepConfig, Task};
use crate::conditions::{
    cartlidge, concave_limit_condition, decreasing_determination, gao_condition, inf_difference,
    limit_estimate, necessary_condition, rows_decreasing, ConditionReport, DeterminationForm,
};
use crate::error::{invalid, Result};
use crate::lab::{carleman_probe, verify_family_45, DEFAULT_SEARCH_RESTARTS};
use crate::schur::{build_certificate, verify_schur, CertificateVariant};
use crate::sequences::{make_weights, ExponentPair, GeneratorKind, GeneratorSpec, WeightSequence};
use crate::solver::{norm_negative_p, operator_norm, NormResult, SolverOptions};

/// Largest section on which the `conditions` task solves for `μ` to
/// evaluate the finite reading of the necessary condition.
const CONDITIONS_SOLVE_MAX_N: usize = 512;

/// β used by the `inequalities` task when the generator does not give one.
const DEFAULT_BETA: f64 = 2.0;

struct Outcome {
    value: f64,
    bound: Option<f64>,
    verdict: &'static str,
    slack: Option<f64>,
    residual: Option<f64>,
    iterations: Option<usize>,
    details: Value,
}

impl Outcome {
    fn new(value: f64, bound: Option<f64>, verdict: &'static str) -> Self {
        Self {
            value,
            bound,
            verdict,
            slack: None,
            residual: None,
            iterations: None,
            details: Value::Null,
        }
    }
}

fn pass_fail(holds: bool) -> &'static str {
    if holds {
        "pass"
    } else {
        "fail"
    }
}

/// Generator template with the cell's `α` and `N` filled in.
fn cell_generator(cfg: &SweepConfig, cell: &Cell) -> GeneratorSpec {
    let mut spec = cfg.generator.clone();
    match spec.kind {
        GeneratorKind::Constant | GeneratorKind::Explicit => {}
        _ => spec.alpha = Some(cell.alpha),
    }
    if spec.kind != GeneratorKind::Explicit {
        spec.n = cell.n;
    }
    spec
}

fn cell_weights(cfg: &SweepConfig, cell: &Cell) -> Result<WeightSequence> {
    let spec = cell_generator(cfg, cell);
    let w = make_weights(&spec)?;
    if w.len() == cell.n {
        Ok(w)
    } else {
        w.truncate(cell.n)
    }
}

fn exponent(cell: &Cell) -> Result<ExponentPair> {
    ExponentPair::new(cell.p.ok_or_else(|| invalid("task needs p"))?)
}

fn solve(w: &WeightSequence, e: ExponentPair, opts: &SolverOptions) -> Result<NormResult> {
    if e.is_negative() {
        norm_negative_p(w, e, opts)
    } else {
        operator_norm(w, e, opts)
    }
}

pub(super) fn run_cell(cfg: &SweepConfig, cell: &Cell) -> Row {
    let generator = cell_generator(cfg, cell);
    let beta = match cell.task {
        Task::Inequalities => Some(generator.beta.unwrap_or(DEFAULT_BETA)),
        _ => generator.beta,
    };
    // tasks that fix their own weights report those instead of the template
    let label = match cell.task {
        Task::Carleman => GeneratorSpec::power(cell.alpha, cell.n).label(),
        Task::Inequalities => {
            GeneratorSpec::mean_power(cell.alpha, beta.unwrap_or(DEFAULT_BETA), cell.n).label()
        }
        Task::Schur => cfg
            .certificate
            .unwrap_or(CertificateVariant::Bennett)
            .as_str()
            .to_string(),
        _ => generator.label(),
    };
    let result = match cell.task {
        Task::Norm => norm_cell(cfg, cell),
        Task::Conditions => conditions_cell(cfg, cell),
        Task::Schur => schur_cell(cfg, cell),
        Task::Carleman => carleman_cell(cfg, cell),
        Task::Inequalities => inequalities_cell(cfg, cell),
    };
    let outcome = result.unwrap_or_else(|e| {
        let mut o = Outcome::new(f64::NAN, None, "error");
        o.details = json!({ "error": e.to_string() });
        o
    });
    Row {
        task: cell.task.as_str().to_string(),
        generator: label,
        alpha: cell.alpha,
        beta,
        p: cell.p,
        n: cell.n,
        value: outcome.value,
        bound: outcome.bound,
        verdict: outcome.verdict.to_string(),
        slack: outcome.slack,
        residual: outcome.residual,
        iterations: outcome.iterations,
        seed: cfg.seed,
        details: outcome.details,
    }
}

/// `value` is `||A||` for `p > 1` and the supremum `μ` for `p < 0`; `bound`
/// is the Cartlidge bound in the same units.
fn norm_cell(cfg: &SweepConfig, cell: &Cell) -> Result<Outcome> {
    let w = cell_weights(cfg, cell)?;
    let e = exponent(cell)?;
    let r = solve(&w, e, &cfg.solver_options())?;
    let c = cartlidge(&w, e);
    let bound = c.implied_bound.map(|mu| {
        if e.is_negative() {
            mu
        } else {
            mu.powf(1.0 / e.p())
        }
    });
    let within = bound.is_none_or(|b| r.norm <= b * (1.0 + 1e-9));
    let mut o = Outcome::new(r.norm, bound, pass_fail(r.converged && within));
    o.slack = bound.map(|b| (b - r.norm) / b);
    o.residual = Some(r.kkt_residual);
    o.iterations = Some(r.iterations);
    o.details = json!({
        "mu": r.mu,
        "converged": r.converged,
        "cartlidge_l": c.constant,
        "restart_spread": r.restart_spread,
    });
    Ok(o)
}

fn with_reading(mut report: ConditionReport, reading: &str) -> ConditionReport {
    report.details.insert("reading".to_string(), json!(reading));
    report
}

/// Every condition that applies to the cell. `value` is the Cartlidge
/// constant, `bound` the bound on `μ` it implies.
fn conditions_cell(cfg: &SweepConfig, cell: &Cell) -> Result<Outcome> {
    let w = cell_weights(cfg, cell)?;
    let e = exponent(cell)?;
    let c = cartlidge(&w, e);
    let l = c.constant.unwrap_or(0.0);
    let mut reports = vec![c.clone()];
    let mut errors = Vec::new();
    for &candidate in &cfg.l_grid {
        match gao_condition(&w, e, candidate) {
            Ok(r) => reports.push(r),
            Err(err) => errors.push(format!("gao(L={candidate}): {err}")),
        }
    }
    if let Some(u) = c.implied_bound {
        reports.push(decreasing_determination(
            &w,
            e,
            u,
            DeterminationForm::UForm,
        )?);
    }
    if !e.is_negative() && l < e.p() {
        reports.push(decreasing_determination(
            &w,
            e,
            l,
            DeterminationForm::LForm,
        )?);
        if w.len() <= CONDITIONS_SOLVE_MAX_N {
            let mu = operator_norm(&w, e, &cfg.solver_options())?.mu;
            reports.push(with_reading(necessary_condition(&w, mu), "finite_section"));
        }
        if let Some(u) = c.implied_bound {
            reports.push(with_reading(necessary_condition(&w, u), "cartlidge_bound"));
        }
    }
    let estimate = limit_estimate(&w);
    if w.len() >= 2 && (0.0..=1.0).contains(&estimate) {
        match concave_limit_condition(&w, estimate) {
            Ok(r) => reports.push(r),
            Err(err) => errors.push(format!("concave_limit: {err}")),
        }
    }
    let inf = inf_difference(&w);
    let mut o = Outcome::new(l, c.implied_bound, pass_fail(c.holds));
    o.details = json!({
        "reports": reports,
        "inf_difference": if inf.is_finite() { json!(inf) } else { Value::Null },
        "rows_decreasing": rows_decreasing(&w),
        "skipped": errors,
    });
    Ok(o)
}

/// Verifies the construction for `α` on `N × N`; `value` is the certified
/// norm bound and `slack` the margin of the worse inequality family.
fn schur_cell(cfg: &SweepConfig, cell: &Cell) -> Result<Outcome> {
    let e = exponent(cell)?;
    let variant = cfg.certificate.unwrap_or(CertificateVariant::Bennett);
    let cert = build_certificate(variant, cell.alpha, e, cell.n)?;
    let report = verify_schur(&cert, e)?;
    let p = e.p();
    let target = cell.alpha * p / (cell.alpha * p - 1.0);
    let mut o = Outcome::new(report.bound, Some(target), pass_fail(report.holds));
    o.slack = Some(-report.worst_row_slack.max(report.worst_col_slack));
    o.details = json!({ "variant": variant.as_str(), "report": report });
    Ok(o)
}

fn carleman_cell(cfg: &SweepConfig, cell: &Cell) -> Result<Outcome> {
    let mut opts = cfg.solver_options();
    if cfg.solver.is_none() {
        opts.restarts = DEFAULT_SEARCH_RESTARTS;
    }
    let probe = carleman_probe(cell.alpha, cell.n, &opts)?;
    let mut o = Outcome::new(probe.e_estimate, Some(probe.target), pass_fail(probe.holds));
    o.slack = Some(probe.target - probe.e_estimate);
    o.iterations = Some(probe.iterations);
    o.details = json!({ "converged": probe.converged, "restart_spread": probe.restart_spread });
    Ok(o)
}

/// The weighted mean family generated by `L_β^{α-1}(i, i-1)`: the ratio at
/// the numerical maximizer against `(αp/(αp-1))^p`.
fn inequalities_cell(cfg: &SweepConfig, cell: &Cell) -> Result<Outcome> {
    let e = exponent(cell)?;
    if e.is_negative() {
        return Err(invalid("the inequality family needs p > 1"));
    }
    let beta = cfg.generator.beta.unwrap_or(DEFAULT_BETA);
    let w = make_weights(&GeneratorSpec::mean_power(cell.alpha, beta, cell.n))?;
    let r = operator_norm(&w, e, &cfg.solver_options())?;
    let check = verify_family_45(cell.alpha, beta, e, &r.maximizer)?;
    let mut o = Outcome::new(check.ratio, Some(check.target), check.verdict.as_str());
    o.slack = Some((check.target - check.ratio) / check.target);
    o.residual = Some(r.kkt_residual);
    o.iterations = Some(r.iterations);
    o.details = json!({
        "family": "mean_power",
        "params": { "alpha": cell.alpha, "beta": beta, "p": e.p() },
        "in_proven_window": check.in_proven_window,
    });
    Ok(o)
}
