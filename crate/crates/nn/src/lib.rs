//! The synthetic model: a feedforward network u_syn(.; theta) with optional
//! skip connections, exact reverse-mode gradient computation and an Adam
//! optimizer. No autodiff framework; the backward pass mirrors the forward
//! pass by hand and is checked against finite differences in the test suite.

pub mod adam;
pub mod checkpoint;
pub mod error;
pub mod mlp;

pub use adam::{adam_step, AdamState};
pub use checkpoint::{load_checkpoint, save_checkpoint};
pub use error::NnError;
pub use mlp::{init_params, Activation, MLPConfig, MLPGrads, MLPParams};
