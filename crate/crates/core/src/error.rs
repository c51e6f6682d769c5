//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the algebra kernel, frame machinery, and certifiers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not positive semidefinite: {0}")]
    NotPositive(String),

    #[error("denominator of the pencil is zero within tolerance")]
    DegenerateDenominator,

    #[error("measure mismatch: {0}")]
    MeasureMismatch(String),

    #[error("family count mismatch: {0}")]
    CountMismatch(String),

    #[error("family index {index} out of range for {count} families")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("family is not a frame: {0}")]
    NotAFrame(String),

    #[error("K operator is zero")]
    ZeroK,
}

pub type Result<T> = std::result::Result<T, Error>;
