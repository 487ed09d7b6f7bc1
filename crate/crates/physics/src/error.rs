use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhysicsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("explicit diffusion stability violated: max(D_u, D_v) * dt * (2/hx^2 + 2/hy^2) = {0} > 1")]
    StabilityViolation(f64),

    #[error("state became non-finite at t = {0}")]
    NonFiniteState(f64),

    #[error("diffusion coefficient kappa is nonpositive at node ({x}, {y}): {value}")]
    NonpositiveKappa { x: f64, y: f64, value: f64 },

    #[error("matrix not positive definite at pivot {0}")]
    NotPositiveDefinite(usize),

    #[error("solve left relative residual {residual} above tolerance {tol}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error(transparent)]
    Core(#[from] hyco_core::CoreError),
}
