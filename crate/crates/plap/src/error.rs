//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enum.
///
/// Solver non-convergence is deliberately *not* an error: solvers return
/// their best iterate together with a [`crate::solver::SolveReport`] whose
/// `converged` flag is false. Errors are reserved for violated contracts
/// (bad domain specs, exponents out of range, degenerate inputs).
#[derive(Debug, Error)]
pub enum PlapError {
    #[error("invalid domain spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("zero function input")]
    ZeroFunction,

    #[error("q = p is the eigenvalue problem; use first_eigenpair")]
    ResonantExponent,

    #[error("q = {q} outside validity range [{lo}, {hi})")]
    ValidityRange { q: f64, lo: f64, hi: f64 },

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("csv schema mismatch: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PlapError>;
