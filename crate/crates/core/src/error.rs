//! Error type shared by the core operations.

use thiserror::Error;

/// Errors raised by grid, dataset, interpolation and file-format operations.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("degenerate sampling region (zero measure)")]
    DegenerateRegion,

    #[error("point ({x}, {y}) outside non-periodic domain")]
    OutOfDomain { x: f64, y: f64 },

    #[error("time {t} outside stored span [{t_min}, {t_max}]")]
    TimeOutOfSpan { t: f64, t_min: f64, t_max: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("reference has zero norm")]
    ZeroNormReference,

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("bad magic bytes (expected \"HYCO\")")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("file truncated or payload size inconsistent")]
    Truncated,

    #[error("malformed CSV at line {line}: {msg}")]
    MalformedCsv { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
