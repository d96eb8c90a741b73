use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The inverse transform produced an imaginary part above the residue threshold.
    #[error("non-real result: imaginary residue {residue:e} exceeds {threshold:e}")]
    NonReal { residue: f64, threshold: f64 },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("gradient descent diverged with learning rate {lr:e} after {iterations} iterations")]
    Divergence { lr: f64, iterations: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
