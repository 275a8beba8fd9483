use thiserror::Error;

use crate::estimator::Degeneracy;

/// Errors raised by the library. Degenerate samples are normally reported
/// in-band (see [`crate::estimator::EstimateResult`]); [`Error::Degenerate`]
/// appears only where an operation cannot proceed without a proper estimate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("alphabet must have at least 2 symbols, got {0}")]
    AlphabetTooSmall(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite entry at index {index}: {value}")]
    NonFinite { index: usize, value: f64 },

    #[error("negative entry at index {index}: {value}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("entry at index {index} is not strictly positive: {value}")]
    NonPositiveEntry { index: usize, value: f64 },

    #[error("probabilities do not sum to 1: sum = {sum}")]
    NotNormalized { sum: f64 },

    #[error("label probability must lie strictly inside (0, 1), got {0}")]
    InvalidLabelProb(f64),

    #[error("sample size must be at least 1")]
    EmptySampleSize,

    #[error("symbol index {index} out of range for alphabet of size {size}")]
    SymbolOutOfRange { index: usize, size: usize },

    #[error("degenerate sample: {0}")]
    Degenerate(Degeneracy),

    #[error("confidence level must lie strictly inside (0, 1), got {0}")]
    InvalidLevel(f64),

    #[error("probability must lie strictly inside (0, 1), got {0}")]
    InvalidProbability(f64),

    #[error("deviation threshold must be positive, got {0}")]
    InvalidThreshold(f64),

    #[error("empty sample")]
    EmptySample,

    #[error("need at least 2 distinct sample sizes, got {0}")]
    TooFewSampleSizes(usize),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),

    #[error("model is at the null (p = q); the normal limit is degenerate")]
    NullModel,

    #[error("every replication was degenerate")]
    AllDegenerate,

    #[error("no non-degenerate records")]
    NoUsableRecords,
}

pub type Result<T> = std::result::Result<T, Error>;
