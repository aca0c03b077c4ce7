//! Numerical laboratory for weighted mean matrices `a_{n,k} = λ_k / Λ_n`.
//!
//! * [`sequences`]: weight generators, prefix sums, the means `L_r(a, b)`.
//! * [`solver`]: finite-section `l^p` norms (`p > 1`) and the negative
//!   exponent supremum, with stationarity residuals and a brute-force oracle.
//! * [`conditions`]: sufficient and necessary conditions for norm bounds and
//!   for the norm being determined on monotone sequences.
//! * [`schur`]: Schur test certificates and the Kaluza–Szegő reduction.
//! * [`lab`]: direct checks of the Hardy-, Carleman- and Bliss-type families.
//! * [`cli`]: sweep configuration and report writers behind the `wmlab` binary.

// negated comparisons are how NaN is made to fail a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod conditions;
pub mod error;
pub mod lab;
pub mod schur;
pub mod sequences;
pub mod solver;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use sequences::{make_weights, ExponentPair, GeneratorKind, GeneratorSpec, WeightSequence};
pub use solver::{NormResult, SolverOptions};

/// Formats a float with 17 significant digits, the form used in every
/// machine-readable output.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}
