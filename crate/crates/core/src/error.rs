use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoresetError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("dimension mismatch: expected dim={expected}, got dim={got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid k={k} for a set of {n} points")]
    InvalidK { k: usize, n: usize },

    #[error("instance too large for exhaustive search: {n} points (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error(
        "coreset threshold {threshold:e} unreachable with k <= {k_max}; best gap {best_gap:e} at k={best_k}"
    )]
    ThresholdUnreachable {
        threshold: f64,
        k_max: usize,
        best_gap: f64,
        best_k: usize,
    },
}

impl CoresetError {
    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            CoresetError::Parse { .. }
                | CoresetError::Validation(_)
                | CoresetError::Config(_)
                | CoresetError::DimensionMismatch { .. }
                | CoresetError::EmptyDataset
                | CoresetError::InvalidK { .. }
                | CoresetError::TooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, CoresetError>;
