//! Model adapters seen by the training loop: the physical players (wrapping
//! the PDE solvers with a flat, scaled parameter view) and the synthetic
//! player (wrapping the network with input normalization and its Adam
//! state).

use std::sync::Arc;

use hyco_core::{
    normalized_l2_error, parameter_error, scatter_bilinear, Dataset, Region, ScalarField,
    SpaceTimePoint,
};
use hyco_nn::{adam_step, init_params, AdamState, MLPConfig, MLPParams};
use hyco_physics::{
    helmholtz_assemble, helmholtz_solve, simulate_gray_scott, GrayScottParams, GrayScottState,
    HelmholtzParams, HelmholtzSolved, Trajectory,
};

use crate::error::TrainError;

/// A co-training problem: observations, the ghost-sampling domain and the
/// ground truth used for metric snapshots (when known).
pub struct Problem {
    pub dataset: Dataset,
    /// Domain the interaction integral runs over; its measure scales the
    /// Monte Carlo estimator.
    pub domain: Region,
    pub reference: Option<ReferenceSolution>,
}

/// Ground truth for metric reporting.
pub enum ReferenceSolution {
    GrayScott {
        trajectory: Arc<Trajectory>,
        /// True (D_u, D_v) in natural units.
        truth: Option<Vec<f64>>,
    },
    Helmholtz {
        field: ScalarField,
        truth: Option<Vec<f64>>,
    },
}

impl ReferenceSolution {
    pub fn e_p(&self, lambda_natural: &[f64]) -> Option<f64> {
        let truth = match self {
            ReferenceSolution::GrayScott { truth, .. } => truth.as_deref()?,
            ReferenceSolution::Helmholtz { truth, .. } => truth.as_deref()?,
        };
        parameter_error(lambda_natural, truth).ok()
    }

    pub fn e_s_physical(&self, realization: &Realization) -> Option<f64> {
        match (self, realization) {
            (ReferenceSolution::GrayScott { trajectory, .. }, Realization::GrayScott(r)) => {
                normalized_l2_error(&r.trajectory.stacked_values(), &trajectory.stacked_values())
                    .ok()
            }
            (ReferenceSolution::Helmholtz { field, .. }, Realization::Helmholtz(r)) => {
                normalized_l2_error(r.solved.field().values(), field.values()).ok()
            }
            _ => None,
        }
    }

    /// Evaluates the network on the full reference grid (all snapshots for
    /// the dynamic problem) and returns the normalized L2 error.
    pub fn e_s_synthetic(&self, synthetic: &SyntheticModel) -> Option<f64> {
        match self {
            ReferenceSolution::GrayScott { trajectory, .. } => {
                let grid = trajectory.grid();
                let mut pred = Vec::new();
                let mut pts = Vec::with_capacity(grid.n_nodes());
                for &t in trajectory.times() {
                    pts.clear();
                    for iy in 0..grid.ny {
                        for ix in 0..grid.nx {
                            pts.push(SpaceTimePoint::new(grid.x(ix), grid.y(iy), t));
                        }
                    }
                    let outs = synthetic.predict(&pts).ok()?;
                    // Snapshot-major, u block then v block, matching
                    // Trajectory::stacked_values.
                    for c in 0..2 {
                        for o in &outs {
                            pred.push(*o.get(c)?);
                        }
                    }
                }
                normalized_l2_error(&pred, &trajectory.stacked_values()).ok()
            }
            ReferenceSolution::Helmholtz { field, .. } => {
                let grid = field.grid();
                let mut pts = Vec::with_capacity(grid.n_nodes());
                for iy in 0..grid.ny {
                    for ix in 0..grid.nx {
                        pts.push(SpaceTimePoint::spatial(grid.x(ix), grid.y(iy)));
                    }
                }
                let outs = synthetic.predict(&pts).ok()?;
                let pred: Vec<f64> = outs.iter().map(|o| o[0]).collect();
                normalized_l2_error(&pred, field.values()).ok()
            }
        }
    }
}

/// Gray-Scott physical player. The trainable parameters are the two
/// diffusivities, optimized in units of 1e-6 so the optimizer steps are
/// well-conditioned; `lambda_natural` reports SI-scale values.
pub struct GrayScottModel {
    pub initial: GrayScottState,
    pub n_steps: usize,
    pub dt: f64,
    pub snapshot_stride: usize,
    pub feed: f64,
    pub kill: f64,
    /// (D_u, D_v) in units of `D_SCALE`.
    lambda_scaled: [f64; 2],
}

impl GrayScottModel {
    /// Diffusivities are optimized as multiples of this scale.
    pub const D_SCALE: f64 = 1e-6;
    /// Lower bound keeping diffusivities positive under projection.
    pub const MIN_SCALED_DIFFUSIVITY: f64 = 1e-4;

    pub fn new(
        initial: GrayScottState,
        n_steps: usize,
        dt: f64,
        snapshot_stride: usize,
        params: GrayScottParams,
    ) -> Self {
        Self {
            initial,
            n_steps,
            dt,
            snapshot_stride,
            feed: params.feed,
            kill: params.kill,
            lambda_scaled: [params.d_u / Self::D_SCALE, params.d_v / Self::D_SCALE],
        }
    }

    fn params(&self) -> GrayScottParams {
        GrayScottParams {
            d_u: self.lambda_scaled[0] * Self::D_SCALE,
            d_v: self.lambda_scaled[1] * Self::D_SCALE,
            feed: self.feed,
            kill: self.kill,
        }
    }
}

/// Helmholtz physical player; the six bump parameters are already O(1), so
/// the trainable vector equals the natural one.
pub struct HelmholtzModel {
    pub forcing: ScalarField,
    lambda: [f64; 6],
}

impl HelmholtzModel {
    pub fn new(forcing: ScalarField, params: HelmholtzParams) -> Self {
        Self {
            forcing,
            lambda: params.to_vec(),
        }
    }

    fn params(&self) -> HelmholtzParams {
        HelmholtzParams::from_vec(&self.lambda).expect("six stored parameters")
    }
}

/// The physical player.
pub enum Physical {
    GrayScott(GrayScottModel),
    Helmholtz(HelmholtzModel),
}

/// An expensive evaluation of the physical model at fixed parameters: a
/// sensitivity-carrying rollout or a factored solve.
pub enum Realization {
    GrayScott(GsRealization),
    Helmholtz(HelmRealization),
}

pub struct GsRealization {
    pub trajectory: Trajectory,
}

pub struct HelmRealization {
    pub solved: HelmholtzSolved,
    params: HelmholtzParams,
}

impl Physical {
    pub fn param_dim(&self) -> usize {
        match self {
            Physical::GrayScott(_) => 2,
            Physical::Helmholtz(_) => 6,
        }
    }

    /// Trainable (scaled) parameter vector.
    pub fn lambda(&self) -> Vec<f64> {
        match self {
            Physical::GrayScott(m) => m.lambda_scaled.to_vec(),
            Physical::Helmholtz(m) => m.lambda.to_vec(),
        }
    }

    pub fn set_lambda(&mut self, lambda: &[f64]) -> Result<(), TrainError> {
        if lambda.len() != self.param_dim() {
            return Err(TrainError::ShapeMismatch(format!(
                "lambda has {} entries, model expects {}",
                lambda.len(),
                self.param_dim()
            )));
        }
        match self {
            Physical::GrayScott(m) => m.lambda_scaled.copy_from_slice(lambda),
            Physical::Helmholtz(m) => m.lambda.copy_from_slice(lambda),
        }
        Ok(())
    }

    /// Reported parameters in natural units.
    pub fn lambda_natural(&self) -> Vec<f64> {
        match self {
            Physical::GrayScott(m) => m
                .lambda_scaled
                .iter()
                .map(|v| v * GrayScottModel::D_SCALE)
                .collect(),
            Physical::Helmholtz(m) => m.lambda.to_vec(),
        }
    }

    /// Projection onto the admissible set, applied after every update.
    pub fn project(&self, lambda: &mut [f64]) {
        match self {
            Physical::GrayScott(_) => {
                for v in lambda.iter_mut() {
                    *v = v.max(GrayScottModel::MIN_SCALED_DIFFUSIVITY);
                }
            }
            Physical::Helmholtz(_) => HelmholtzParams::project(lambda),
        }
    }

    /// Runs the expensive part (rollout or factored solve) at the current
    /// parameters. `need_grad` co-integrates sensitivities for Gray-Scott;
    /// the Helmholtz factorization serves both cases.
    pub fn prepare(&self, need_grad: bool) -> Result<Realization, TrainError> {
        match self {
            Physical::GrayScott(m) => {
                let trajectory = simulate_gray_scott(
                    &m.params(),
                    &m.initial,
                    m.n_steps,
                    m.dt,
                    m.snapshot_stride,
                    need_grad,
                )?;
                Ok(Realization::GrayScott(GsRealization { trajectory }))
            }
            Physical::Helmholtz(m) => {
                let params = m.params();
                let sys = helmholtz_assemble(&params, m.forcing.grid(), &m.forcing)?;
                let solved = helmholtz_solve(sys)?;
                Ok(Realization::Helmholtz(HelmRealization { solved, params }))
            }
        }
    }
}

impl Realization {
    /// Model predictions at scattered points.
    pub fn predict(&self, points: &[SpaceTimePoint]) -> Result<Vec<Vec<f64>>, TrainError> {
        match self {
            Realization::GrayScott(r) => Ok(r
                .trajectory
                .predict(points)?
                .into_iter()
                .map(|p| p.to_vec())
                .collect()),
            Realization::Helmholtz(r) => {
                let mut out = Vec::with_capacity(points.len());
                for p in points {
                    out.push(vec![hyco_core::bilinear_interpolate(
                        r.solved.field(),
                        p.x,
                        p.y,
                    )?]);
                }
                Ok(out)
            }
        }
    }

    /// Gradient of a scalar loss in the trainable (scaled) parameters given
    /// per-point prediction gradients: sensitivity contraction for
    /// Gray-Scott, one adjoint solve for Helmholtz.
    pub fn grad(
        &self,
        points: &[SpaceTimePoint],
        dl_dpred: &[Vec<f64>],
    ) -> Result<Vec<f64>, TrainError> {
        if points.len() != dl_dpred.len() {
            return Err(TrainError::ShapeMismatch(format!(
                "{} points vs {} prediction gradients",
                points.len(),
                dl_dpred.len()
            )));
        }
        match self {
            Realization::GrayScott(r) => {
                let (_, sens) = r.trajectory.predict_with_sensitivities(points)?;
                let mut g = vec![0.0; 2];
                for (s, dl) in sens.iter().zip(dl_dpred) {
                    for param in 0..2 {
                        // Chain rule into scaled units.
                        g[param] += (dl[0] * s[param][0] + dl[1] * s[param][1])
                            * GrayScottModel::D_SCALE;
                    }
                }
                Ok(g)
            }
            Realization::Helmholtz(r) => {
                let grid = r.solved.field().grid();
                let mut dl_du = vec![0.0; grid.n_nodes()];
                for (p, dl) in points.iter().zip(dl_dpred) {
                    scatter_bilinear(grid, p.x, p.y, dl[0], &mut dl_du)?;
                }
                let g = r.solved.adjoint_gradient(&r.params, &dl_du)?;
                Ok(g.to_vec())
            }
        }
    }
}

/// Affine map taking each input coordinate into [-1, 1] over the problem
/// domain; keeps the network inputs well-scaled regardless of the physical
/// units of space and time.
#[derive(Debug, Clone, Copy)]
pub struct InputMap {
    center: [f64; 3],
    half: [f64; 3],
    dims: usize,
}

impl InputMap {
    pub fn from_domain(domain: &Region, input_dim: usize) -> Self {
        let r = domain.rect;
        let (tc, th) = match domain.time {
            Some((t0, t1)) => (0.5 * (t0 + t1), 0.5 * (t1 - t0)),
            None => (0.0, 1.0),
        };
        Self {
            center: [0.5 * (r.x_min + r.x_max), 0.5 * (r.y_min + r.y_max), tc],
            half: [0.5 * (r.x_max - r.x_min), 0.5 * (r.y_max - r.y_min), th],
            dims: input_dim,
        }
    }

    fn map(&self, p: &SpaceTimePoint, out: &mut Vec<f64>) {
        out.clear();
        out.push((p.x - self.center[0]) / self.half[0]);
        out.push((p.y - self.center[1]) / self.half[1]);
        if self.dims == 3 {
            out.push((p.t - self.center[2]) / self.half[2]);
        }
    }
}

/// The synthetic player: network parameters, optimizer state and the input
/// normalization.
pub struct SyntheticModel {
    params: MLPParams,
    adam: AdamState,
    input_map: InputMap,
}

impl SyntheticModel {
    pub fn new(config: &MLPConfig, domain: &Region) -> Result<Self, TrainError> {
        let params = init_params(config)?;
        let adam = AdamState::new(params.n_params());
        Ok(Self {
            adam,
            input_map: InputMap::from_domain(domain, config.input_dim),
            params,
        })
    }

    pub fn from_params(params: MLPParams, domain: &Region) -> Self {
        let adam = AdamState::new(params.n_params());
        let input_map = InputMap::from_domain(domain, params.config().input_dim);
        Self {
            params,
            adam,
            input_map,
        }
    }

    pub fn params(&self) -> &MLPParams {
        &self.params
    }

    pub fn n_params(&self) -> usize {
        self.params.n_params()
    }

    pub fn checksum(&self) -> u64 {
        crate::history::params_checksum(&self.params.flatten())
    }

    pub fn predict(&self, points: &[SpaceTimePoint]) -> Result<Vec<Vec<f64>>, TrainError> {
        let mut raw = Vec::new();
        let mut out = Vec::with_capacity(points.len());
        for p in points {
            self.input_map.map(p, &mut raw);
            out.push(self.params.forward_raw(&raw)?);
        }
        Ok(out)
    }

    /// Flat parameter gradient of a scalar loss given per-point output
    /// gradients.
    pub fn grad_flat(
        &self,
        points: &[SpaceTimePoint],
        dl_dpred: &[Vec<f64>],
    ) -> Result<Vec<f64>, TrainError> {
        let mut inputs = Vec::with_capacity(points.len());
        let mut raw = Vec::new();
        for p in points {
            self.input_map.map(p, &mut raw);
            inputs.push(raw.clone());
        }
        let refs: Vec<&[f64]> = inputs.iter().map(|v| v.as_slice()).collect();
        Ok(self.params.backward_raw(&refs, dl_dpred)?.flatten())
    }

    /// One Adam step on the supplied flat gradient.
    pub fn apply_gradient(&mut self, grad: &[f64], lr: f64) -> Result<(), TrainError> {
        let mut flat = self.params.flatten();
        adam_step(&mut flat, grad, &mut self.adam, lr)?;
        self.params.set_from_flat(&flat)?;
        Ok(())
    }
}
