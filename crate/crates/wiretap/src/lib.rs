//! Explicit wiretap-channel coding: invertible strong extractors composed
//! with linear error-correcting codes, channel models from memoryless to
//! adversarially varying, closed-form secrecy bounds, and exhaustive
//! oracles that verify every bound at desk scale.

pub mod bounds;
pub mod channel;
pub mod ecc;
pub mod extractor;
pub mod field;
pub mod oracle;
pub mod prob;
pub mod protocol;
pub mod verify;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityRange(f64),
    #[error("operands belong to different field descriptions")]
    FieldMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("the zero seed is not a valid field element seed")]
    ZeroSeed,
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
