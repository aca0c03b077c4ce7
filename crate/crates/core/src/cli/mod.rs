//! Sweep configuration, the per-cell task runners and the report writers
//! behind the `wmlab` binary.
//!
//! A sweep evaluates every task on every cell of the `(α, p, N)` grid. Cells
//! run on a worker pool (size from `WMLAB_WORKERS`, default: all cores) and
//! rows are written in grid order by a single writer, so identical configs
//! produce byte-identical output.

mod args;
mod report;
mod tasks;

pub use args::{run, Cli};
pub use report::{render_matrix, write_rows, Format, Row, CSV_COLUMNS};

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::schur::CertificateVariant;
use crate::sequences::GeneratorSpec;
use crate::solver::SolverOptions;

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "WMLAB_WORKERS";

/// Exit code when every cell was computed.
pub const EXIT_OK: i32 = 0;
/// Exit code for configuration errors.
pub const EXIT_CONFIG: i32 = 1;
/// Exit code when at least one cell failed.
pub const EXIT_CELL_FAILURE: i32 = 2;
/// Exit code for I/O errors.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Norm,
    Conditions,
    Schur,
    Carleman,
    Inequalities,
}

impl Task {
    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Norm => "norm",
            Task::Conditions => "conditions",
            Task::Schur => "schur",
            Task::Carleman => "carleman",
            Task::Inequalities => "inequalities",
        }
    }

    /// Tasks whose cells do not depend on `p`.
    fn ignores_p(&self) -> bool {
        matches!(self, Task::Carleman)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// JSON sweep description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Weight family; `n` (and `alpha`, for the parametrized kinds) are set
    /// per cell from the grids.
    pub generator: GeneratorSpec,
    pub p_grid: Vec<f64>,
    pub alpha_grid: Vec<f64>,
    pub n_grid: Vec<usize>,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: Option<SolverOptions>,
    /// Construction used by the `schur` task.
    #[serde(default)]
    pub certificate: Option<CertificateVariant>,
    /// Candidate constants `L` tried in the Gao condition.
    #[serde(default)]
    pub l_grid: Vec<f64>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() || self.alpha_grid.is_empty() || self.n_grid.is_empty() {
            return Err(invalid("p_grid, alpha_grid and n_grid must be non-empty"));
        }
        if self.tasks.is_empty() {
            return Err(invalid("tasks must be non-empty"));
        }
        if let Some(p) = self
            .p_grid
            .iter()
            .find(|p| !p.is_finite() || (0.0..=1.0).contains(*p))
        {
            return Err(invalid(format!(
                "p = {p} is not allowed (need p > 1 or p < 0)"
            )));
        }
        if self.alpha_grid.iter().any(|a| !a.is_finite()) {
            return Err(invalid("alpha_grid must be finite"));
        }
        if self.n_grid.contains(&0) {
            return Err(invalid("n_grid entries must be at least 1"));
        }
        if let Some(opts) = &self.solver {
            opts.validate()?;
        }
        Ok(())
    }

    pub fn solver_options(&self) -> SolverOptions {
        let mut opts = self.solver.clone().unwrap_or_default();
        opts.seed = self.seed;
        opts
    }
}

/// One point of the sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub task: Task,
    pub alpha: f64,
    pub p: Option<f64>,
    pub n: usize,
}

/// Cells in output order: task, then α, then p, then N.
pub fn grid(cfg: &SweepConfig) -> Vec<Cell> {
    let mut cells = Vec::new();
    for &task in &cfg.tasks {
        for &alpha in &cfg.alpha_grid {
            let ps: Vec<Option<f64>> = if task.ignores_p() {
                vec![None]
            } else {
                cfg.p_grid.iter().map(|&p| Some(p)).collect()
            };
            for p in ps {
                for &n in &cfg.n_grid {
                    cells.push(Cell { task, alpha, p, n });
                }
            }
        }
    }
    cells
}

/// Number of workers: `WMLAB_WORKERS` when set to a positive integer,
/// otherwise every available core.
pub fn worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&k| k > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub failed: usize,
}

impl SweepOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 {
            EXIT_OK
        } else {
            EXIT_CELL_FAILURE
        }
    }
}

/// Evaluates every cell. Per-cell errors become rows with verdict `error`;
/// only an invalid configuration aborts.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let cells = grid(cfg);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    let rows: Vec<Row> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| tasks::run_cell(cfg, cell))
            .collect()
    });
    let failed = rows.iter().filter(|r| r.verdict == "error").count();
    Ok(SweepOutcome { rows, failed })
}
