use thiserror::Error;

/// Errors raised by the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested operating point violates a resource constraint.
    #[error("infeasible point: {0}")]
    Infeasible(String),
    /// Two inputs that must differ coincide (e.g. equal band gains in a swap).
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// Malformed solver configuration.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        return Err(Error::Domain(format!("{name} must be nonnegative, got {v}")));
    }
    Ok(())
}
