use thiserror::Error;

pub type Result<T> = std::result::Result<T, OtfsError>;

#[derive(Debug, Error)]
pub enum OtfsError {
    #[error("empty input")]
    Empty,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is singular or near-singular (pivot {pivot:e} below tolerance {tolerance:e})")]
    Singular { pivot: f64, tolerance: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("block {block} is not circulant (deviation {deviation:e})")]
    NotCirculant { block: usize, deviation: f64 },

    #[error("covariance is not positive semi-definite")]
    NotPositiveSemiDefinite,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl OtfsError {
    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Self {
        OtfsError::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl ToString) -> Self {
        OtfsError::InvalidParameter {
            name,
            reason: reason.to_string(),
        }
    }
}
