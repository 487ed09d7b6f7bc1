//! Parametric physical models with trainable parameters: the Gray-Scott
//! reaction-diffusion system (explicit time-stepper, forward sensitivities
//! in the two diffusivities) and the heterogeneous Helmholtz boundary-value
//! problem (flux-form finite differences, sparse direct solve, discrete
//! adjoint gradients in the six coefficient parameters).

pub mod error;
pub mod gray_scott;
pub mod helmholtz;

pub use error::PhysicsError;
pub use gray_scott::{
    gray_scott_initial_state, gray_scott_step, simulate_gray_scott, GrayScottParams,
    GrayScottState, Trajectory,
};
pub use helmholtz::{
    compute_forcing, gaussian_bump, helmholtz_assemble, helmholtz_solve, reference_solution,
    HelmholtzParams, HelmholtzSolved, HelmholtzSystem,
};
