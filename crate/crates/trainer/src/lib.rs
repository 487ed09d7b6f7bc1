//! Hybrid co-training of a parametric physical model and a synthetic
//! network.
//!
//! The two players carry their own losses,
//!
//! ```text
//! L1 = beta  * L_phy(Lambda) + w_int * L_int(Theta, Lambda)
//! L2 = alpha * L_syn(Theta)  + w_int * L_int(Theta, Lambda)
//! ```
//!
//! coupled through a Monte Carlo ghost-point estimate of the interaction
//! integral. Training alternates one optimizer step per player per
//! iteration (sequentially by default, simultaneously in jacobi mode),
//! resamples the ghost set every iteration from a seeded counter stream,
//! and stops early when the interaction loss stabilizes.

pub mod config;
pub mod error;
pub mod history;
pub mod losses;
pub mod models;
pub mod stopping;
pub mod train;

pub use config::{HycoConfig, LambdaOptimizer, Seeds, UpdateSchedule};
pub use error::TrainError;
pub use history::{IterRecord, LossBreakdown, TrainHistory};
pub use losses::{data_loss, interaction_loss_mc, InteractionLoss};
pub use models::{
    GrayScottModel, HelmholtzModel, Physical, Problem, Realization, ReferenceSolution,
    SyntheticModel,
};
pub use stopping::check_stopping;
pub use train::{player_gradient_norms, run_baseline, train, Method, TrainOutcome};
