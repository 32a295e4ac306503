use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operator is not Hermitian: max |A - A^dagger| = {deviation:e}")]
    NonHermitianInput { deviation: f64 },

    #[error("operator contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension {0}: every subsystem needs d >= 2")]
    InvalidDimension(usize),

    #[error("true expectation {value} lies outside the reachable range [{low}, {high}]")]
    OutOfSpectrumRange { value: f64, low: f64, high: f64 },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid efficiency: {0}")]
    InvalidEfficiency(String),

    #[error("invalid count record: {0}")]
    InvalidCountRecord(String),

    #[error("infeasible allocation: {0}")]
    InfeasibleAllocation(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invalid state: {0}")]
    InvalidState(String),
}
