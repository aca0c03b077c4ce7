use thiserror::Error;

/// Errors produced by the library. CLI and FFI layers map these onto exit
/// and status codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weight at index {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("sequence entry at index {index} must be strictly positive ({value})")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("sequence is identically zero")]
    ZeroSequence,

    #[error("problem size {n} exceeds the limit {limit} for this routine")]
    TooLarge { n: usize, limit: usize },

    #[error("majorization hypothesis fails at prefix {index}")]
    PrefixHypothesis { index: usize },

    #[error("sequence is not monotone")]
    NotMonotone,

    #[error("auxiliary sequence invariant violated at index {index}")]
    AuxInvariant { index: usize },

    #[error("supplied limit {supplied} is inconsistent with the numeric estimate {estimate}")]
    InconsistentLimit { supplied: f64, estimate: f64 },

    #[error("gamma function pole at {0}")]
    GammaPole(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
