use thiserror::Error;

/// Errors produced by state constructors, validators, and measurement
/// operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not Hermitian within {tolerance:e} (defect {defect:e})")]
    NonHermitianInput { defect: f64, tolerance: f64 },
    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid Schmidt form: {0}")]
    InvalidSchmidtForm(String),
    #[error("basis is not orthonormal within tolerance: {0}")]
    InvalidBasis(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("branch probability {probability:e} is below the suppression threshold; no partner state")]
    ZeroProbabilityBranch { probability: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
