//! Error taxonomy for the crate.
//!
//! Three failure families matter to callers:
//!
//! * structural — a caller handed us inconsistent shapes or parameters;
//! * capability — the request is well-formed but outside what an engine
//!   supports (e.g. a Bloch-only path asked to carry coherences);
//! * resource — the request would exceed the exact-engine size cap.
//!
//! The CLI maps these onto distinct process exit codes, so the variants are
//! deliberately coarse.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;

/// Everything that can go wrong below the CLI layer.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Shape or parameter validation failed (wrong vector length, η out of
    /// range, non-square matrix, ...). The message names the offending field.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The request is valid but exceeds the exact-engine resource cap
    /// (chain plus one attached reservoir qubit must fit in 2^10 amplitudes).
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    /// Internal numerical failure (eigensolver did not converge, ...).
    /// Should not occur for physical inputs; surfaced rather than panicking.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CoreError {
    /// Convenience constructor for validation failures.
    pub fn invalid(msg: impl Into<String>) -> Self {
        CoreError::Invalid(msg.into())
    }
}
