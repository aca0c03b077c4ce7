//! Independent oracle for small sections: projected gradient ascent over the
//! simplex in `s = a^p` (p > 1) or `s = a` (p < 0), where the objective
//! `G(s) = Σ_n (Σ_{k≤n} λ_k/Λ_n s_k^{1/p})^p` is concave. Matrix entries are
//! formed densely from the weights; nothing is shared with the power
//! iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SolverOptions;
use crate::error::{Error, Result};
use crate::sequences::{ExponentPair, WeightSequence};

pub const BRUTE_FORCE_MAX_N: usize = 6;
const MIN_STARTS: usize = 100;
const FLOOR: f64 = 1e-14;

struct Dense {
    n: usize,
    entries: Vec<Vec<f64>>,
    p: f64,
}

impl Dense {
    fn new(w: &WeightSequence, p: f64) -> Self {
        let lam = w.lambdas();
        let n = lam.len();
        let entries = (0..n)
            .map(|row| {
                let total: f64 = lam[..=row].iter().sum();
                lam[..=row].iter().map(|l| l / total).collect()
            })
            .collect();
        Self { n, entries, p }
    }

    fn value(&self, s: &[f64]) -> f64 {
        let b: Vec<f64> = s.iter().map(|x| x.powf(1.0 / self.p)).collect();
        self.entries
            .iter()
            .map(|row| {
                let a: f64 = row.iter().zip(&b).map(|(c, x)| c * x).sum();
                a.powf(self.p)
            })
            .sum()
    }

    fn gradient(&self, s: &[f64]) -> Vec<f64> {
        let b: Vec<f64> = s.iter().map(|x| x.powf(1.0 / self.p)).collect();
        let mut g = vec![0.0; self.n];
        for row in &self.entries {
            let a: f64 = row.iter().zip(&b).map(|(c, x)| c * x).sum();
            let f = a.powf(self.p - 1.0);
            for (k, c) in row.iter().enumerate() {
                g[k] += f * c;
            }
        }
        for (gk, sk) in g.iter_mut().zip(s) {
            *gk *= sk.powf(1.0 / self.p - 1.0);
        }
        g
    }
}

/// Projection onto `{s ≥ FLOOR, Σ s = 1}`.
fn project(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let budget = 1.0 - FLOOR * n as f64;
    let y: Vec<f64> = x.iter().map(|v| v - FLOOR).collect();
    let mut sorted = y.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, v) in sorted.iter().enumerate() {
        acc += v;
        let t = (acc - budget) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    y.iter().map(|v| (v - theta).max(0.0) + FLOOR).collect()
}

fn ascend(d: &Dense, start: &[f64]) -> f64 {
    let mut s = project(start);
    let mut val = d.value(&s);
    let mut step = 1e-2;
    let mut stalls = 0;
    for _ in 0..20_000 {
        let g = d.gradient(&s);
        let mut accepted = false;
        for _ in 0..60 {
            let cand = project(
                &s.iter()
                    .zip(&g)
                    .map(|(x, gk)| x + step * gk)
                    .collect::<Vec<_>>(),
            );
            let lin: f64 = g
                .iter()
                .zip(cand.iter().zip(&s))
                .map(|(gk, (c, x))| gk * (c - x))
                .sum();
            let v = d.value(&cand);
            if v >= val + 1e-4 * lin && v >= val {
                let gain = v - val;
                s = cand;
                val = v;
                accepted = true;
                stalls = if gain <= 1e-16 * val { stalls + 1 } else { 0 };
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !accepted || stalls > 20 {
            break;
        }
    }
    val
}

fn grid_starts(n: usize) -> Vec<Vec<f64>> {
    let res = match n {
        1 => return vec![vec![1.0]],
        2 => 2000,
        3 => 200,
        _ => return Vec::new(),
    };
    let mut pts = Vec::new();
    for i in 0..=res {
        if n == 2 {
            let x = i as f64 / res as f64;
            pts.push(vec![x, 1.0 - x]);
        } else {
            for j in 0..=(res - i) {
                let x = i as f64 / res as f64;
                let y = j as f64 / res as f64;
                pts.push(vec![x, y, (1.0 - x - y).max(0.0)]);
            }
        }
    }
    pts
}

/// Best value found by multi-start ascent (and a grid pass for `N ≤ 3`):
/// the norm `μ^{1/p}` for `p > 1`, the supremum `μ` itself for `p < 0`.
pub fn brute_force_norm(w: &WeightSequence, e: ExponentPair, opts: &SolverOptions) -> Result<f64> {
    let n = w.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    let p = e.p();
    let d = Dense::new(w, p);
    let mut best = f64::NEG_INFINITY;

    let grid = grid_starts(n);
    if let Some(g) = grid.iter().max_by(|a, b| d.value(a).total_cmp(&d.value(b))) {
        best = best.max(d.value(g)).max(ascend(&d, g));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    best = best.max(ascend(&d, &vec![1.0 / n as f64; n]));
    for _ in 0..opts.restarts.max(MIN_STARTS) {
        let raw: Vec<f64> = (0..n)
            .map(|_| -rng.random_range(f64::MIN_POSITIVE..1.0f64).ln())
            .collect();
        let total: f64 = raw.iter().sum();
        let start: Vec<f64> = raw.iter().map(|x| x / total).collect();
        best = best.max(ascend(&d, &start));
    }
    Ok(if e.is_negative() {
        best
    } else {
        best.powf(1.0 / p)
    })
}
