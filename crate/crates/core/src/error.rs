use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },

    #[error("input is not normalized (sum = {0})")]
    NotNormalized(f64),

    #[error("matrix is not symmetric/Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("dimension {dim} exceeds the limit {limit}")]
    TooLarge { dim: usize, limit: usize },

    /// Repeated projections drove the state norm to numerical zero.
    #[error("state extinguished by measurements at step {step} (ln norm = {log_norm})")]
    Extinction { step: usize, log_norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
