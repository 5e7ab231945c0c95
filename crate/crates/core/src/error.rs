use thiserror::Error;

/// Errors raised by the spectral machinery and the variational solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A grid field carries non-negligible l = 0 content.
    #[error("circulation violation: l = 0 projection {projection:e} exceeds tolerance {tolerance:e}")]
    CirculationViolation { projection: f64, tolerance: f64 },

    /// The relative enstrophy of a field does not match the prescribed budget.
    #[error("constraint violation: relative enstrophy {actual} differs from Q_rel = {expected}")]
    ConstraintViolation { expected: f64, actual: f64 },

    /// The supplied base state is not a stationary point of the augmented functional.
    #[error("base state is not stationary: first-order residual {residual:e}")]
    NotStationary { residual: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
