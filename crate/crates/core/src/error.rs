//! Error type shared by every module of the crate.
//!
//! Two failure families matter to callers: *domain* errors (the input is
//! outside the contract — wrong dimension, non-unit direction, invalid
//! probability vector, …) and *numeric* errors (the input was fine but the
//! computation could not be completed to tolerance — eigensolver
//! non-convergence, a degenerate likelihood, …). The CLI maps the former to
//! exit code 2 and the latter to exit code 3.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The input violates a precondition; the message names the offending
    /// quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two objects that must share a Fock sector (or a dimension) do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The cyclic Jacobi eigensolver failed to reach its off-diagonal
    /// tolerance within the sweep budget; `residual` is the final
    /// off-diagonal Frobenius norm.
    #[error("eigensolver did not converge: off-diagonal residual {residual:.3e} after max sweeps")]
    NonConvergence { residual: f64 },

    /// Every observed outcome has vanishing model probability over the whole
    /// search interval, so the likelihood has no maximizer. Cannot occur when
    /// the samples were drawn from the model itself.
    #[error("degenerate likelihood: all observed outcomes have zero probability on the search interval")]
    DegenerateLikelihood,
}

impl Error {
    /// Convenience constructor for [`Error::Domain`].
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the numeric (as opposed to domain) failure family.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::DegenerateLikelihood
        )
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
