//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Problem data violates the admissibility ordering 0 < u1 <= 1/gamma^4 < 1 <= u2
    /// or the physical frequency ordering behind it.
    #[error("invalid problem parameters: {0}")]
    InvalidSpec(String),

    /// A square-root or inverse-cosine argument left its domain by more than the
    /// clamping tolerance; the candidate root is not a genuine extremal.
    #[error("invalid root: {context} argument {value:e} outside domain")]
    InvalidRoot { context: &'static str, value: f64 },

    /// The adaptive integrator could not meet the error tolerance.
    #[error("numeric integration failed: {0}")]
    IntegrationFailure(String),

    /// A solution expected to be valid failed trajectory verification.
    #[error("validation failed: {0}")]
    ValidationFailed(String),

    /// The guaranteed single-switching solution was not found for a valid spec.
    #[error("no extremal found: {0}")]
    NoSolution(String),
}
