use thiserror::Error;

/// Errors raised by the analytical and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure did not reach its tolerance.
    #[error("accuracy error in {context}: best estimate {estimate:e} with error bound {error_bound:e}")]
    Accuracy {
        context: String,
        estimate: f64,
        error_bound: f64,
    },

    /// Input data that violates a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// A configuration the library deliberately does not evaluate.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 2.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "path-loss exponent must satisfy eta > 2 (got {eta}); \
             the interference power is infinite otherwise"
        )))
    }
}
