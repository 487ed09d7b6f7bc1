//! Trainer configuration.

use serde::{Deserialize, Serialize};

use crate::error::TrainError;

/// Independent seed streams: `data` drives dataset construction and
/// minibatch selection, `ghost` the per-iteration ghost sets, `init` the
/// parameter initializers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub data: u64,
    pub ghost: u64,
    pub init: u64,
}

impl Seeds {
    /// Derives the three streams from one master seed.
    pub fn from_master(master: u64) -> Self {
        Self {
            data: hyco_core::derive_seed(master, 1),
            ghost: hyco_core::derive_seed(master, 2),
            init: hyco_core::derive_seed(master, 3),
        }
    }
}

/// Per-iteration update order of the two players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateSchedule {
    /// Physical step first, then the synthetic step against the fresh
    /// physical iterate (the sequential reading of the alternating scheme).
    GaussSeidel,
    /// Both steps computed from the same iterate and applied together; the
    /// parallelizable variant.
    Jacobi,
}

/// Optimizer driving the physical parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaOptimizer {
    /// Adam in the scaled parameter space (default).
    Adam,
    /// Literal plain gradient descent.
    PlainSgd,
}

/// Weights, learning rates, budgets and seeds of a co-training run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HycoConfig {
    /// Weight of the synthetic data-fit loss.
    pub alpha: f64,
    /// Weight of the physical data-fit loss.
    pub beta: f64,
    /// Weight multiplying the interaction loss in both player objectives.
    pub interaction_weight: f64,
    /// Ghost points per iteration (H).
    pub ghost_count: usize,
    pub lr_theta: f64,
    pub lr_lambda: f64,
    /// Iteration budget (K).
    pub max_iters: usize,
    /// Relative-change tolerance of the stopping rule.
    pub stop_tol: f64,
    /// Consecutive sub-tolerance changes required before stopping; damps
    /// ghost-resampling noise.
    pub stop_window: usize,
    /// Frozen-ghost gradient-norm tolerance for the physical player at stop.
    pub grad_tol_lambda: f64,
    /// Same for the synthetic player.
    pub grad_tol_theta: f64,
    /// Optional L2 penalty on the physical parameters.
    pub l2_reg_lambda: f64,
    /// Optional L2 penalty on the network parameters.
    pub l2_reg_theta: f64,
    pub seeds: Seeds,
    pub update_schedule: UpdateSchedule,
    pub lambda_optimizer: LambdaOptimizer,
    /// Record solution/parameter errors every this many iterations
    /// (0 = never).
    pub metric_stride: usize,
    /// Synthetic-update minibatch size; `None` = full batch.
    pub minibatch: Option<usize>,
}

impl Default for HycoConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            interaction_weight: 1.0,
            ghost_count: 100,
            lr_theta: 1e-3,
            lr_lambda: 1e-2,
            max_iters: 1000,
            stop_tol: 1e-4,
            stop_window: 10,
            grad_tol_lambda: 5e-3,
            grad_tol_theta: 5e-3,
            l2_reg_lambda: 0.0,
            l2_reg_theta: 0.0,
            seeds: Seeds::from_master(0),
            update_schedule: UpdateSchedule::GaussSeidel,
            lambda_optimizer: LambdaOptimizer::Adam,
            metric_stride: 0,
            minibatch: None,
        }
    }
}

impl HycoConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let nonneg = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("interaction_weight", self.interaction_weight),
            ("lr_theta", self.lr_theta),
            ("lr_lambda", self.lr_lambda),
            ("l2_reg_lambda", self.l2_reg_lambda),
            ("l2_reg_theta", self.l2_reg_theta),
        ];
        for (name, v) in nonneg {
            if !v.is_finite() || v < 0.0 {
                return Err(TrainError::InvalidConfig(format!("{name} = {v}")));
            }
        }
        if self.ghost_count == 0 {
            return Err(TrainError::InvalidConfig("ghost_count must be >= 1".into()));
        }
        if !(self.stop_tol > 0.0) {
            return Err(TrainError::InvalidConfig(format!(
                "stop_tol = {}",
                self.stop_tol
            )));
        }
        if self.stop_window == 0 {
            return Err(TrainError::InvalidConfig("stop_window must be >= 1".into()));
        }
        if let Some(mb) = self.minibatch {
            if mb == 0 {
                return Err(TrainError::InvalidConfig("minibatch must be >= 1".into()));
            }
        }
        Ok(())
    }
}
