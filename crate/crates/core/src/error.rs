use thiserror::Error;

/// Errors raised by the representation, fitting, and benchmark layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid term: exponent {exponent} exceeds the bound of {bound}")]
    InvalidTerm { exponent: i32, bound: i32 },

    #[error("design matrix contains non-finite values")]
    IndeterminateTerm,

    #[error("dataset contains non-finite values")]
    NonFiniteData,

    #[error("dataset has no rows")]
    EmptyData,

    #[error("least-squares solution is not finite")]
    NumericFailure,

    #[error(
        "unknown benchmark `{0}`; valid ids: F1,F2,F3,F4,F5,F6,F7,F8,F9,F10,F11,F12,F13,F14,F15,F16,F17"
    )]
    UnknownBenchmark(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
