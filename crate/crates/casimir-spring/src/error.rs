//! Crate-wide error type.

use thiserror::Error;

use crate::lifshitz::LifshitzResult;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument violated a domain precondition (negative energy, T <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Material name not present in the registry.
    #[error("unknown material `{name}`; valid names are: {known}")]
    UnknownMaterial { name: String, known: String },

    /// Operation not defined for this material model (e.g. the permittivity
    /// of a perfect conductor).
    #[error("model `{model}` does not support {operation}")]
    UnsupportedModel {
        model: String,
        operation: &'static str,
    },

    /// The Matsubara sum or the momentum quadrature failed to reach the
    /// requested tolerance within the configured caps. The partial result is
    /// attached so callers can inspect how far the evaluation got.
    #[error("convergence failure: {reason} (partial value {:.6e}, est. error {:.3e})", partial.value, partial.est_error)]
    Convergence {
        reason: String,
        partial: LifshitzResult,
    },

    /// Malformed or inconsistent sweep configuration.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
