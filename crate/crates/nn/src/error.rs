use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("invalid network config: {0}")]
    InvalidConfig(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error(transparent)]
    Core(#[from] hyco_core::CoreError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("checkpoint sidecar: {0}")]
    Sidecar(#[from] serde_json::Error),
}
