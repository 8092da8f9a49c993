use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = EifError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EifError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid range: lo ({lo}) > hi ({hi})")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("insufficient data: requested {requested} rows but only {available} available")]
    InsufficientData { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {found}: {reason}")]
    UnsupportedDimension { found: usize, reason: &'static str },

    #[error("non-finite value at coordinate {index}")]
    NonFinite { index: usize },

    #[error("metric undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}{}: {message}", column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        line: u64,
        column: Option<usize>,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("corrupt model: {0}")]
    CorruptModel(String),

    #[error("unsupported model version {found} (this build supports version {supported})")]
    UnsupportedVersion { found: u64, supported: u64 },
}

impl EifError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        EifError::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        EifError::Io {
            path: path.into(),
            source,
        }
    }
}
