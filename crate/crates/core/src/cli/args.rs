use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use super::{
    run_sweep, write_rows, Format, OutputSpec, SweepConfig, Task, EXIT_CONFIG, EXIT_IO, EXIT_OK,
};
use crate::schur::CertificateVariant;
use crate::sequences::{GeneratorKind, GeneratorSpec};
use crate::solver::MonotoneRestriction;

/// Parameter sweeps over weighted mean matrices.
///
/// Every subcommand reads an optional JSON config (`--config`) and applies
/// the inline flags on top of it. Exit codes: 0 all cells computed, 1 bad
/// configuration, 2 some cells failed, 3 I/O error. The worker count is
/// taken from `WMLAB_WORKERS`.
#[derive(Debug, Parser)]
#[command(name = "wmlab", version, allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Finite-section norms (p > 1) or negative-exponent suprema (p < 0).
    Norm(CommonArgs),
    /// Condition reports for each cell.
    Check(CommonArgs),
    /// Schur certificate verification (`--variant bennett|improved`).
    Schur(CommonArgs),
    /// Weighted Carleman probe for λ_k = k^α (p is ignored).
    Carleman(CommonArgs),
    /// Inequality family generated by L_β^{α-1}(i, i-1).
    Ineq(CommonArgs),
    /// Full sweep; tasks come from the config or `--tasks`.
    Sweep(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// JSON sweep config.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// constant, power, diff_power, mean_power, reference_prime or explicit.
    #[arg(long, value_parser = parse_enum::<GeneratorKind>)]
    pub generator: Option<GeneratorKind>,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Weights for the explicit generator.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_enum::<CertificateVariant>)]
    pub variant: Option<CertificateVariant>,
    /// none, decreasing or increasing.
    #[arg(long, value_parser = parse_enum::<MonotoneRestriction>)]
    pub restriction: Option<MonotoneRestriction>,
    /// Candidate constants for the Gao condition.
    #[arg(long = "l", value_delimiter = ',')]
    pub l_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_enum::<Task>)]
    pub tasks: Option<Vec<Task>>,
}

fn parse_enum<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown value `{s}`"))
}

enum Failure {
    Config(String),
    Io(String),
}

impl Command {
    fn parts(&self) -> (&CommonArgs, Option<Task>) {
        match self {
            Command::Norm(a) => (a, Some(Task::Norm)),
            Command::Check(a) => (a, Some(Task::Conditions)),
            Command::Schur(a) => (a, Some(Task::Schur)),
            Command::Carleman(a) => (a, Some(Task::Carleman)),
            Command::Ineq(a) => (a, Some(Task::Inequalities)),
            Command::Sweep(a) => (a, None),
        }
    }
}

fn base_config() -> SweepConfig {
    SweepConfig {
        generator: GeneratorSpec::constant(0),
        p_grid: vec![2.0],
        alpha_grid: vec![1.0],
        n_grid: vec![],
        tasks: vec![],
        output: OutputSpec::default(),
        seed: 0,
        solver: None,
        certificate: None,
        l_grid: vec![],
    }
}

fn build_config(cmd: &Command) -> Result<SweepConfig, Failure> {
    let (args, task) = cmd.parts();
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => base_config(),
    };
    if let Some(kind) = args.generator {
        cfg.generator.kind = kind;
    }
    if let Some(b) = args.beta {
        cfg.generator.beta = Some(b);
    }
    if let Some(values) = &args.values {
        cfg.generator.n = values.len();
        cfg.generator.values = Some(values.clone());
        if args.generator.is_none() {
            cfg.generator.kind = GeneratorKind::Explicit;
        }
    }
    if let Some(v) = &args.alpha {
        cfg.alpha_grid = v.clone();
    }
    if let Some(v) = &args.p {
        cfg.p_grid = v.clone();
    }
    match &args.n {
        Some(v) => cfg.n_grid = v.clone(),
        None if cfg.n_grid.is_empty() && cfg.generator.kind == GeneratorKind::Explicit => {
            cfg.n_grid = vec![cfg.generator.n];
        }
        None => {}
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(v) = args.variant {
        cfg.certificate = Some(v);
    }
    if let Some(r) = args.restriction {
        let opts = cfg.solver.take().unwrap_or_default();
        cfg.solver = Some(opts.with_restriction(r));
    }
    if let Some(l) = &args.l_grid {
        cfg.l_grid = l.clone();
    }
    if let Some(t) = task {
        cfg.tasks = vec![t];
    } else if let Some(t) = &args.tasks {
        cfg.tasks = t.clone();
    }
    if let Some(f) = args.format {
        cfg.output.format = f;
    }
    if let Some(out) = &args.out {
        cfg.output.path = Some(out.clone());
    }
    cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let cfg = build_config(&cli.command)?;
    let outcome = run_sweep(&cfg).map_err(|e| Failure::Config(e.to_string()))?;
    let io_err = |e: io::Error| Failure::Io(e.to_string());
    match &cfg.output.path {
        Some(path) => {
            let file =
                File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_rows(&outcome.rows, cfg.output.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_rows(&outcome.rows, cfg.output.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
    }
    if outcome.failed > 0 {
        eprintln!(
            "wmlab: {} of {} cells failed",
            outcome.failed,
            outcome.rows.len()
        );
    }
    Ok(outcome.exit_code())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("wmlab: configuration error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Io(msg)) => {
            eprintln!("wmlab: I/O error: {msg}");
            EXIT_IO
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> Result<SweepConfig, Failure> {
        let argv = std::iter::once("wmlab").chain(args.iter().copied());
        let cli = Cli::try_parse_from(argv).map_err(|e| Failure::Config(e.to_string()))?;
        build_config(&cli.command)
    }

    #[test]
    fn inline_flags() {
        let cfg = config(&[
            "norm",
            "--generator",
            "power",
            "--alpha",
            "0.5,1",
            "--p",
            "-2,2",
            "--n",
            "4",
        ])
        .ok()
        .unwrap();
        assert_eq!(cfg.generator.kind, GeneratorKind::Power);
        assert_eq!(cfg.alpha_grid, vec![0.5, 1.0]);
        assert_eq!(cfg.p_grid, vec![-2.0, 2.0]);
        assert_eq!(cfg.tasks, vec![Task::Norm]);
    }

    #[test]
    fn explicit_values_set_n() {
        let cfg = config(&["check", "--values", "1,2,3"]).ok().unwrap();
        assert_eq!(cfg.generator.kind, GeneratorKind::Explicit);
        assert_eq!(cfg.n_grid, vec![3]);
    }

    #[test]
    fn bad_configs() {
        assert!(matches!(
            config(&["norm", "--p", "0.5", "--n", "4"]),
            Err(Failure::Config(_))
        ));
        assert!(matches!(config(&["norm"]), Err(Failure::Config(_))));
        assert!(matches!(
            config(&["sweep", "--n", "4"]),
            Err(Failure::Config(_))
        ));
        assert!(matches!(
            config(&["norm", "--config", "/nonexistent/cfg.json"]),
            Err(Failure::Io(_))
        ));
        assert!(config(&["norm", "--generator", "bogus", "--n", "4"]).is_err());
    }
}
