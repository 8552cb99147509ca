use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{func}: argument outside the domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("hypothesis `{hypothesis}` violated: {detail}")]
    Hypothesis {
        hypothesis: &'static str,
        detail: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{func}: quadrature did not converge (error estimate {estimate:e})")]
    Quadrature { func: &'static str, estimate: f64 },

    #[error("Picard iterates diverged after {iterations} iterations (residual {residual:e})")]
    Divergence { iterations: usize, residual: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
