use thiserror::Error;

/// Errors raised by the optimization pipeline.
///
/// Contract violations (mismatched dimensions, out-of-bounds inputs handed to
/// a pure function) panic instead; these variants cover conditions a caller
/// can reasonably recover from or report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation budget exhausted ({consumed}/{maximum} true evaluations used)")]
    BudgetExhausted { consumed: usize, maximum: usize },

    #[error("not supported: {0}")]
    NotSupported(String),

    #[error("kernel matrix is ill-conditioned even with jitter {jitter:e}")]
    IllConditioned { jitter: f64 },

    #[error("no usable tangent direction at this point")]
    EmptyTangent,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
