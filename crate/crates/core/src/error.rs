use thiserror::Error;

pub type Result<T, E = QndError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QndError {
    #[error("division by a zero complex denominator")]
    ZeroDenominator,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("truncation dimension {dim} is below the required {required} for |alpha| = {alpha_abs}")]
    Truncation { dim: usize, required: usize, alpha_abs: f64 },

    #[error("decision means are not strictly increasing at n = {at} (sensitivity limit reached)")]
    NonMonotone { at: usize },
}

impl QndError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QndError::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        QndError::InvalidInput(msg.into())
    }
}
