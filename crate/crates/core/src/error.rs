use thiserror::Error;

/// Errors raised by the calculus, function-space and harness layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed operands: non-finite entries, non-square or non-unitary input.
    #[error("input error: {0}")]
    Input(String),

    /// A decomposition failed or could not reproduce its input.
    #[error("numeric error: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },

    /// A parameter is outside its admissible range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A function was evaluated outside its working interval.
    #[error("domain error: {message}")]
    Domain { message: String, offending: Vec<f64> },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>, offending: Vec<f64>) -> Self {
        Error::Domain {
            message: msg.into(),
            offending,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
