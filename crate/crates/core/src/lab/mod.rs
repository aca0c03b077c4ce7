//! Direct left/right evaluations and worst-case searches for the inequality
//! families: Hardy-type weighted means, the weighted Carleman inequality,
//! the discrete Bliss-type inequalities and the `p = 2` bilinear form.

mod bliss;
mod carleman;
mod hardy;

pub use bliss::{
    bliss_constant, bliss_limit_term, carleman_type_constant, verify_carleman_type,
    verify_discrete_bliss, BlissParams, CarlemanTypeCheck, DiscreteBlissCheck, DiscreteBlissInput,
};
pub use carleman::{carleman_probe, carleman_ratio, CarlemanProbe, DEFAULT_SEARCH_RESTARTS};
pub use hardy::{
    cartlidge_pointwise, duality_p2_check, hardy_ratio, verify_family_45, worst_case_search,
    DualityCheck, Family45Check, PointwiseCheck, WorstCase, DUALITY_MAX_N,
};

use serde::Serialize;

/// Outcome of a check against a constant: inside a proven parameter window
/// the comparison is a pass or a fail; outside it the ratio is only logged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Unproven,
}

impl Verdict {
    pub fn from_flag(holds: bool) -> Self {
        if holds {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unproven => "unproven",
        }
    }
}
