use thiserror::Error;

/// Errors raised by state construction, circuit assembly, sampling and audits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} exceeds the supported maximum of {max}", max = crate::qmath::MAX_DIM)]
    DimensionTooLarge(usize),

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (|norm^2 - 1| = {0:e})")]
    NotNormalized(f64),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("not a density operator: {0}")]
    InvalidDensity(String),

    #[error("matrix is not unitary (max |U^dag U - I| = {0:e})")]
    NotUnitary(f64),

    #[error("detector overlap magnitude {0} exceeds 1")]
    OverlapOutOfRange(f64),

    #[error("barrier transmission {0} outside [0, 1]")]
    TransmissionOutOfRange(f64),

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),

    #[error("estimator needs at least one trial")]
    NoTrials,

    #[error("sampled audit needs at least {min} trials per point, got {got}")]
    TooFewTrials { min: u64, got: u64 },

    #[error("phase grid is empty")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
