use thiserror::Error;

/// Errors raised by the library.
///
/// Non-convergence of a limit is *not* an error: evaluations return a
/// status-tagged result instead. Errors are reserved for invalid input and
/// for failures of the numerical machinery underneath.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid termination derivative: {0}")]
    InvalidTermination(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("quadrature did not converge on [{lo}, {hi}] (error estimate {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },

    #[error("unknown integrand `{0}`")]
    UnknownIntegrand(String),

    #[error("missing parameter `{0}`")]
    MissingParam(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: String, reason: String },

    #[error("invalid limit policy: {0}")]
    InvalidPolicy(String),

    #[error("too few samples for limit detection: need {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("limit did not converge: {0}")]
    NotConverged(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Returns `value` unchanged when finite, otherwise an error naming `x`.
pub(crate) fn finite_at(x: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { x, value })
    }
}
