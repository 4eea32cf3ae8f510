use thiserror::Error;

/// Input outside the domain of a tensor operation or constitutive update.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("determinant {0:e} is not positive")]
    NonPositiveDeterminant(f64),

    #[error("tensor is singular (determinant {0:e})")]
    Singular(f64),

    #[error("tensor is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("time step {0} is negative")]
    NegativeTimeStep(f64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid material parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} outside loading domain [{start}, {end}]")]
    OutsideLoadingDomain { t: f64, start: f64, end: f64 },
}

/// A Newton-based stepper failed even after bisecting the step.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{method} did not converge for dt = {dt} after {depth} bisections")]
pub struct ConvergenceError {
    pub method: &'static str,
    pub dt: f64,
    pub depth: u32,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Domain(#[from] DomainError),

    #[error(transparent)]
    Convergence(#[from] ConvergenceError),

    #[error("model file: {0}")]
    ModelFile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
