use thiserror::Error;

/// Errors shared by all pipeline stages.
#[derive(Debug, Clone, Error)]
pub enum DdError {
    /// Structural mismatch (arities, shapes, preconditions on inputs).
    #[error("structural error: {0}")]
    Structural(String),

    /// A documented domain precondition was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured resource budget was exceeded. The message carries the
    /// partial progress report.
    #[error("resource budget exceeded: {0}")]
    Resource(String),

    /// Parse failure, with a byte offset into the input.
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// The input endomorphism is not dominant; the witness is the vanishing
    /// Jacobian determinant.
    #[error("endomorphism is not dominant (Jacobian determinant {jacobian})")]
    NotDominant { jacobian: String },

    /// An internal invariant failed. Indicates a bug, never bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

impl DdError {
    pub fn structural(msg: impl Into<String>) -> Self {
        DdError::Structural(msg.into())
    }
    pub fn domain(msg: impl Into<String>) -> Self {
        DdError::Domain(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        DdError::Resource(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        DdError::Internal(msg.into())
    }
}
