use serde::Serialize;

use super::MonotoneRestriction;

/// Tolerance on max-normalized entries used when classifying maximizers.
pub const SHAPE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximizerShape {
    Decreasing,
    Increasing,
    Neither,
}

/// Monotonicity of `a`, comparing adjacent entries after scaling by
/// `max |a_n|`. A constant sequence reports `Decreasing` (nonincreasing).
pub fn maximizer_shape(a: &[f64], tol: f64) -> MaximizerShape {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return MaximizerShape::Decreasing;
    }
    let steps = || a.windows(2).map(|w| (w[1] - w[0]) / scale);
    if steps().all(|d| d <= tol) {
        MaximizerShape::Decreasing
    } else if steps().all(|d| d >= -tol) {
        MaximizerShape::Increasing
    } else {
        MaximizerShape::Neither
    }
}

/// Euclidean projection onto the monotone cone (pool adjacent violators).
pub fn project_monotone(a: &[f64], dir: MonotoneRestriction) -> Vec<f64> {
    match dir {
        MonotoneRestriction::None => a.to_vec(),
        MonotoneRestriction::Increasing => pava_increasing(a),
        MonotoneRestriction::Decreasing => {
            let rev: Vec<f64> = a.iter().rev().copied().collect();
            let mut out = pava_increasing(&rev);
            out.reverse();
            out
        }
    }
}

fn pava_increasing(a: &[f64]) -> Vec<f64> {
    // blocks of (mean, count)
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(a.len());
    for &x in a {
        blocks.push((x, 1));
        while blocks.len() > 1 {
            let (m2, c2) = blocks[blocks.len() - 1];
            let (m1, c1) = blocks[blocks.len() - 2];
            if m1 <= m2 {
                break;
            }
            blocks.pop();
            let c = c1 + c2;
            *blocks.last_mut().unwrap() = ((m1 * c1 as f64 + m2 * c2 as f64) / c as f64, c);
        }
    }
    blocks
        .into_iter()
        .flat_map(|(m, c)| std::iter::repeat_n(m, c))
        .collect()
}
