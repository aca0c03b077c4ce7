//! Finite-section operator norms of weighted mean matrices.
//!
//! For `p > 1` the norm `μ_{p,N}^{1/p}` is found by the nonlinear power
//! iteration `a ← Φ_q(Aᵀ Φ_p(A a))`, `Φ_s(y) = y^{s-1}`, normalized to the
//! unit `l^p` sphere. For `p < 0` the same map, applied to `b = a^{1/p}`,
//! climbs the supremum of `Σ_n (Σ_k λ_k/Λ_n a_k^{1/p})^p` over the
//! probability simplex. Both objectives are concave in `s = a^p` (resp. `a`)
//! on the simplex, which is what the multi-start brute-force oracle relies on.

mod brute;
mod kkt;
mod negative;
mod operator;
mod power;
mod shape;

pub use brute::{brute_force_norm, BRUTE_FORCE_MAX_N};
pub use kkt::kkt_residual;
pub use negative::norm_negative_p;
pub use operator::{apply_weighted_mean, DenseMatrix, NonnegativeOperator};
pub use power::{operator_norm, operator_norm_of};
pub use shape::{maximizer_shape, project_monotone, MaximizerShape, SHAPE_TOL};

pub(crate) use kkt::stationarity_residual;
pub(crate) use power::restart_rng;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Stationarity threshold (relative) required for convergence.
pub const KKT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneRestriction {
    #[default]
    None,
    Decreasing,
    Increasing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Relative change in `μ` below which the iteration may stop.
    pub tol: f64,
    pub max_iter: usize,
    /// Random restarts in addition to the uniform start (negative `p`,
    /// restricted searches and the brute-force oracle).
    pub restarts: usize,
    pub seed: u64,
    pub monotone_restriction: MonotoneRestriction,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
            restarts: 8,
            seed: 0,
            monotone_restriction: MonotoneRestriction::None,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(invalid("max_iter must be at least 1"));
        }
        Ok(())
    }

    pub fn with_restriction(mut self, r: MonotoneRestriction) -> Self {
        self.monotone_restriction = r;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormResult {
    /// `μ_{p,N}`: for `p > 1` the p-th power of the norm, for `p < 0` the
    /// supremum of the left side of the negative-exponent inequality.
    pub mu: f64,
    /// `μ^{1/p}` for `p > 1`; equal to `mu` for `p < 0`.
    pub norm: f64,
    /// `||a||_p = 1` for `p > 1`; `Σ a_n = 1` for `p < 0`.
    pub maximizer: Vec<f64>,
    pub kkt_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest relative disagreement in value between restarts, when
    /// restarts were run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart_spread: Option<f64>,
    /// For `p < 0`: `b = a^{1/p}` with `Σ b^p = 1`, the maximizer written in
    /// the form `Σ (A b)^p ≤ U Σ b^p`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_form: Option<Vec<f64>>,
}
