use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("zero input: {0}")]
    ZeroInput(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed permutation `{field}`: {reason}")]
    MalformedPermutation { field: String, reason: String },

    #[error("origami is not connected: the permutations do not act transitively on the squares")]
    NotTransitive,

    #[error("surface has no marked points under the `{0}` policy")]
    NoMarkedPoints(&'static str),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("generator {index} has determinant {det}, expected 1")]
    Determinant { index: usize, det: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("stream is not sorted by height: {0}")]
    StreamNotSorted(String),

    #[error("precision exhausted at {bits} bits while deciding {what}")]
    PrecisionExhausted { bits: u32, what: String },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("insufficient enumeration radius: need {needed}, have {available}")]
    InsufficientRadius { needed: f64, available: f64 },

    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
