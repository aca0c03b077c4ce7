use super::power::multi_start;
use super::{stationarity_residual, NormResult, SolverOptions};
use crate::error::{invalid, Result};
use crate::sequences::{ExponentPair, WeightSequence};

/// Restarts must agree to this relative spread before a non-stationary
/// (boundary) supremum is accepted.
const BOUNDARY_AGREEMENT: f64 = 1e-9;

/// Supremum of `Σ_n (Σ_k λ_k/Λ_n a_k^{1/p})^p` over `Σ a_n = 1, a_n ≥ 0`,
/// for `p < 0`. Points with a zero coordinate count as value 0.
///
/// The iteration runs on the power form `b = a^{1/p}` (so that the objective
/// reads `Σ (A b)^p` with `Σ b^p = 1`). `opts.monotone_restriction` refers to
/// `b`, the sequence on which the supremum is said to be determined. The
/// result carries both `a` (`maximizer`) and `b` (`power_form`); since
/// `p < 0` they have opposite monotonicity.
pub fn norm_negative_p(
    w: &WeightSequence,
    e: ExponentPair,
    opts: &SolverOptions,
) -> Result<NormResult> {
    if !e.is_negative() {
        return Err(invalid("norm_negative_p needs p < 0"));
    }
    opts.validate()?;
    let p = e.p();
    let residual = |b: &[f64], mu: f64| stationarity_residual(w, p, b, mu);
    let (run, spread) = multi_start(w, p, opts.monotone_restriction, opts, &residual);
    let a_raw: Vec<f64> = run.b.iter().map(|x| x.powf(p)).collect();
    let total = crate::sum::sum(a_raw.iter().copied());
    let maximizer = a_raw.into_iter().map(|x| x / total).collect();
    let converged = run.converged || (opts.restarts > 0 && spread < BOUNDARY_AGREEMENT);
    Ok(NormResult {
        mu: run.mu,
        norm: run.mu,
        maximizer,
        kkt_residual: run.residual,
        iterations: run.iterations,
        converged,
        restart_spread: Some(spread),
        power_form: Some(run.b),
    })
}
