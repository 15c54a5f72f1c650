use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at {0}")]
    Pole(f64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series did not converge: {0}")]
    SeriesNonConvergence(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("correlation eigenvalues are not distinct (minimum spacing {0:e})")]
    DegenerateEigenvalues(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
