use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::sequences::WeightSequence;
use crate::solver::{project_monotone, MonotoneRestriction, SolverOptions};
use crate::sum::{self, NeumaierSum};

/// Restarts used by the CLI for worst-case searches.
pub const DEFAULT_SEARCH_RESTARTS: usize = 64;

const MAX_HALVINGS: usize = 60;

fn check_positive(w: &WeightSequence, a: &[f64]) -> Result<()> {
    if a.len() != w.len() {
        return Err(Error::LengthMismatch {
            expected: w.len(),
            actual: a.len(),
        });
    }
    match a.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        Some(i) => Err(Error::NonPositiveEntry {
            index: i + 1,
            value: a[i],
        }),
        None => Ok(()),
    }
}

/// `ln G_n = Σ_{k≤n} λ_k ln a_k / Λ_n`.
fn log_geometric_means(w: &WeightSequence, ln_a: &[f64]) -> Vec<f64> {
    let mut acc = NeumaierSum::new();
    w.lambdas()
        .iter()
        .zip(ln_a)
        .zip(w.prefix())
        .map(|((l, x), big)| {
            acc.add(l * x);
            acc.value() / big
        })
        .collect()
}

/// `Σ_n Π_{k≤n} a_k^{λ_k/Λ_n} / Σ_n a_n`, products taken in log space.
pub fn carleman_ratio(w: &WeightSequence, a: &[f64]) -> Result<f64> {
    check_positive(w, a)?;
    Ok(ratio_unchecked(w, a))
}

fn ratio_unchecked(w: &WeightSequence, a: &[f64]) -> f64 {
    let shift = a.iter().copied().fold(f64::MIN_POSITIVE, f64::max).ln();
    let ln_a: Vec<f64> = a.iter().map(|x| x.ln() - shift).collect();
    let top = sum::sum(log_geometric_means(w, &ln_a).into_iter().map(f64::exp));
    let bottom = sum::sum(ln_a.iter().map(|x| x.exp()));
    top / bottom
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlemanProbe {
    /// Largest ratio found; a lower bound for the best constant `E_N`.
    pub e_estimate: f64,
    /// `e^{1/(α+1)}`
    pub target: f64,
    pub holds: bool,
    pub maximizer: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub restart_spread: f64,
}

struct Ascent {
    value: f64,
    a: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn normalize(a: &mut [f64]) {
    let s = sum::sum(a.iter().copied());
    for x in a.iter_mut() {
        *x /= s;
    }
}

// On the simplex the objective Σ_n G_n(a) is concave; its stationarity
// condition is a_k ∝ λ_k Σ_{n≥k} G_n/Λ_n, iterated here with a log-space
// back-off whenever a step does not increase the objective.
fn ascend(
    w: &WeightSequence,
    start: Vec<f64>,
    restriction: MonotoneRestriction,
    opts: &SolverOptions,
) -> Ascent {
    let mut a = project_monotone(&start, restriction);
    normalize(&mut a);
    let mut value = ratio_unchecked(w, &a);
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let ln_a: Vec<f64> = a.iter().map(|x| x.ln()).collect();
        let g: Vec<f64> = log_geometric_means(w, &ln_a)
            .into_iter()
            .map(f64::exp)
            .collect();
        let terms: Vec<f64> = g.iter().zip(w.prefix()).map(|(x, big)| x / big).collect();
        let tails = sum::suffix_sums(&terms);
        let mut cand: Vec<f64> = w.lambdas().iter().zip(&tails).map(|(l, t)| l * t).collect();
        cand = project_monotone(&cand, restriction);
        normalize(&mut cand);
        let mut cand_value = ratio_unchecked(w, &cand);
        let mut t = 1.0;
        let mut halvings = 0;
        while !(cand_value >= value * (1.0 - 1e-15)) && halvings < MAX_HALVINGS {
            t *= 0.5;
            halvings += 1;
            cand = a
                .iter()
                .zip(&cand)
                .map(|(x, y)| (x.ln() * (1.0 - t) + y.ln() * t).exp())
                .collect();
            cand = project_monotone(&cand, restriction);
            normalize(&mut cand);
            cand_value = ratio_unchecked(w, &cand);
        }
        if !(cand_value >= value * (1.0 - 1e-15)) {
            converged = true;
            break;
        }
        let change = (cand_value - value).abs() / value;
        let step = a
            .iter()
            .zip(&cand)
            .map(|(x, y)| ((x - y) / y).abs())
            .fold(0.0, f64::max);
        a = cand;
        value = cand_value;
        if change < opts.tol && step < opts.tol.sqrt() {
            converged = true;
            break;
        }
    }
    Ascent {
        value,
        a,
        iterations,
        converged,
    }
}

/// Multi-start maximization of [`carleman_ratio`] for `λ_k = k^α`, compared
/// with the conjectured best constant `e^{1/(α+1)}`.
pub fn carleman_probe(alpha: f64, n: usize, opts: &SolverOptions) -> Result<CarlemanProbe> {
    if !(alpha > -1.0 && alpha.is_finite()) {
        return Err(invalid(format!("need α > -1, got {alpha}")));
    }
    opts.validate()?;
    let w = WeightSequence::power(alpha, n)?;
    let restriction = opts.monotone_restriction;
    let runs: Vec<Ascent> = (0..=opts.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                vec![1.0; n]
            } else {
                use rand::Rng;
                let mut rng = crate::solver::restart_rng(opts.seed, r);
                (0..n)
                    .map(|_| -rng.random_range(f64::MIN_POSITIVE..1.0f64).ln())
                    .collect()
            };
            ascend(&w, start, restriction, opts)
        })
        .collect();
    let best_index = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.value > runs[b].value { i } else { b });
    let lo = runs.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    let best = &runs[best_index];
    let target = (1.0 / (alpha + 1.0)).exp();
    Ok(CarlemanProbe {
        e_estimate: best.value,
        target,
        holds: best.value <= target + 1e-6,
        maximizer: best.a.clone(),
        iterations: runs.iter().map(|r| r.iterations).sum(),
        converged: best.converged,
        restart_spread: best.value - lo,
    })
}
