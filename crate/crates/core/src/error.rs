use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An iterative method did not converge within its budget.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// A computed result failed its own accuracy certificate
    /// (Wronskian drift, residual, ...).
    #[error("numerical quality check failed: {0}")]
    Quality(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Whether the error was caused by bad input rather than by the numerics.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Precondition(_) | Error::Parse(_))
    }
}
