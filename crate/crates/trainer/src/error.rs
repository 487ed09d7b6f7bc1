use thiserror::Error;

#[derive(Debug, Error)]
pub enum TrainError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("empty dataset")]
    EmptyDataset,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{model} update produced a non-finite gradient; lambda = {lambda:?}, gradient = {gradient:?}")]
    NonFiniteGradient {
        model: &'static str,
        lambda: Vec<f64>,
        gradient: Vec<f64>,
    },

    #[error("method requires a {0} model")]
    MissingModel(&'static str),

    #[error(transparent)]
    Core(#[from] hyco_core::CoreError),

    #[error(transparent)]
    Nn(#[from] hyco_nn::NnError),

    #[error(transparent)]
    Physics(#[from] hyco_physics::PhysicsError),
}
