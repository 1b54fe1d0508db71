//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by parameter validation, the power solver, capacity
/// evaluation, and the queue simulator.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violated its domain (named so callers can report it).
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An operation that needs at least one element received none.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Fixed-point iteration did not converge within the iteration budget.
    #[error(
        "fixed-point iteration for the {branch} branch did not converge \
             within {max_iters} iterations (last residual {residual:.3e})"
    )]
    NonConvergence {
        branch: &'static str,
        max_iters: u32,
        residual: f64,
    },

    /// The threshold-price bracket could not straddle the power constraint.
    #[error("gamma calibration failed: {0}")]
    CalibrationFailure(String),

    /// Effective capacity is undefined at theta = 0; use the ergodic rate.
    #[error("theta must be positive for effective-capacity evaluation")]
    ThetaZero,

    /// Not enough tail mass to fit a decay exponent.
    #[error("insufficient queue-tail mass: {0}")]
    InsufficientTail(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
