//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of the evaluators.
///
/// `Domain` and `Degenerate` describe inputs outside the mathematical domain of an
/// operation. `Numeric` and `Divergent` describe a computation that could not reach
/// the requested accuracy or has no finite value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Inputs violate a precondition (incompatible indices, bad ranges, unsupported branch).
    #[error("domain error: {0}")]
    Domain(String),

    /// Both points sit on the z axis, so only the total z-rotation angle is defined.
    #[error(
        "degenerate rotation: both points lie on the pole; the rotation is fixed only up to \
         its total z-angle Phi+Psi ({0})"
    )]
    Degenerate(String),

    /// An iterative or quadrature computation failed to converge.
    #[error("numeric error: {message}; last estimates {last:?}")]
    Numeric {
        /// Human-readable diagnosis.
        message: String,
        /// The last estimates produced before giving up.
        last: Vec<f64>,
    },

    /// A requested limit or integral has no finite value.
    #[error("divergent: {0}")]
    Divergent(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>, last: Vec<f64>) -> Self {
        Error::Numeric {
            message: msg.into(),
            last,
        }
    }
}

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
