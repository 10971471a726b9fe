use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Adaptive quadrature ran out of evaluations before meeting its tolerance.
    /// The best estimate so far is kept so callers can decide whether it is usable.
    #[error("quadrature did not converge after {evals} evaluations (estimate {estimate:e}, error {error:e})")]
    Quadrature {
        estimate: f64,
        error: f64,
        evals: usize,
    },

    #[error("minimization bracket failure: {0}")]
    Bracket(String),

    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
