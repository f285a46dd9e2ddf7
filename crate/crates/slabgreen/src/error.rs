//! Error taxonomy shared by every numeric routine in the crate.

use thiserror::Error;

/// Failure modes of kernel, eigenvalue, and temperature evaluations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SlabError {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Request exceeds a hard capacity cap (series order, table row).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An intermediate quantity left the representable range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A series could not be driven below the requested tolerance.
    #[error(
        "series not converged: bound {achieved:.3e} > tolerance {tolerance:.3e} \
         after {terms} terms"
    )]
    Convergence {
        achieved: f64,
        tolerance: f64,
        terms: usize,
    },

    /// Cancellation destroyed more digits than the tolerance allows.
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    /// Approximate formula requested outside its validity guard.
    #[error("outside validity range: {0}")]
    Validity(String),

    /// Root bracketing or polishing failed.
    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, SlabError>;

pub(crate) fn ensure_finite(value: f64, name: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(SlabError::Domain(format!("{name} must be finite, got {value}")))
    }
}
