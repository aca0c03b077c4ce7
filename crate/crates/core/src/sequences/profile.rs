use serde::Serialize;

use super::WeightSequence;

/// Absolute tolerance on second differences when classifying the profile.
pub const SHAPE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileShape {
    Convex,
    Concave,
    Affine,
    Neither,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioProfile {
    /// `Λ_n / λ_n`
    pub ratios: Vec<f64>,
    pub first_difference: Vec<f64>,
    pub shape: ProfileShape,
}

/// Shape of the sequence `{Λ_n/λ_n}`.
pub fn ratio_profile(w: &WeightSequence) -> RatioProfile {
    let first_difference = w.ratio_differences();
    let second: Vec<f64> = first_difference.windows(2).map(|d| d[1] - d[0]).collect();
    let up = second.iter().any(|&s| s > SHAPE_TOL);
    let down = second.iter().any(|&s| s < -SHAPE_TOL);
    let shape = match (up, down) {
        (false, false) => ProfileShape::Affine,
        (true, false) => ProfileShape::Convex,
        (false, true) => ProfileShape::Concave,
        (true, true) => ProfileShape::Neither,
    };
    RatioProfile {
        ratios: w.ratios(),
        first_difference,
        shape,
    }
}
