use thiserror::Error;

/// Errors raised by the quantum-information routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    #[error("state vector is not normalized (norm squared {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("vectors are not orthonormal (Gram deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("ensemble is empty")]
    EmptyEnsemble,

    #[error("ensemble has {states} states but {probs} probabilities")]
    LengthMismatch { states: usize, probs: usize },

    #[error("occupation number {value} for alternative {index} is not a nonnegative integer")]
    NonIntegerOccupation { index: usize, value: f64 },

    #[error("joint table holds no trials")]
    ZeroTrials,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by a failed numerical consistency check rather
    /// than by malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
