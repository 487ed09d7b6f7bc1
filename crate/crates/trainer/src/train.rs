//! The alternating optimization loop and its ablation baselines.

use std::time::Instant;

use hyco_core::{derive_seed, sampling, SpaceTimePoint};
use hyco_nn::{adam_step, AdamState};
use rand::Rng;

use crate::config::{HycoConfig, LambdaOptimizer, UpdateSchedule};
use crate::error::TrainError;
use crate::history::{params_checksum, IterRecord, LossBreakdown, TrainHistory};
use crate::losses::{data_loss, interaction_loss_mc};
use crate::models::{Physical, Problem, Realization, SyntheticModel};
use crate::stopping::check_stopping;

/// Training method: full co-training or one of the decoupled baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Hyco,
    /// Synthetic updates only, no interaction term.
    PureNn,
    /// Physical updates only, no interaction term (the classical
    /// data-mismatch inverse solver).
    PhysicalOnly,
}

/// Final state of a run: full history plus the trained models.
pub struct TrainOutcome {
    pub history: TrainHistory,
    pub physical: Option<Physical>,
    pub synthetic: Option<SyntheticModel>,
}

/// Runs the co-training loop (`Method::Hyco`).
pub fn train(
    config: &HycoConfig,
    problem: &Problem,
    physical: Physical,
    synthetic: SyntheticModel,
) -> (TrainOutcome, Option<TrainError>) {
    run(Method::Hyco, config, problem, Some(physical), Some(synthetic))
}

/// Runs one of the decoupled baselines.
pub fn run_baseline(
    kind: Method,
    config: &HycoConfig,
    problem: &Problem,
    physical: Option<Physical>,
    synthetic: Option<SyntheticModel>,
) -> (TrainOutcome, Option<TrainError>) {
    run(kind, config, problem, physical, synthetic)
}

/// Per-point gradient of the mean-squared data loss, scaled by `weight`:
/// `weight * (2 / M) (pred - obs)`.
fn data_residual_grads(
    preds: &[Vec<f64>],
    observations: &[&Vec<f64>],
    weight: f64,
) -> Vec<Vec<f64>> {
    let m = preds.len() as f64;
    preds
        .iter()
        .zip(observations)
        .map(|(p, o)| {
            p.iter()
                .zip(o.iter())
                .map(|(pi, oi)| weight * 2.0 / m * (pi - oi))
                .collect()
        })
        .collect()
}

fn minibatch_indices(m: usize, take: usize, seed: u64) -> Vec<usize> {
    let mut rng = sampling::rng_for(seed);
    let mut idx: Vec<usize> = (0..m).collect();
    let take = take.min(m);
    for i in 0..take {
        let j = rng.gen_range(i..m);
        idx.swap(i, j);
    }
    idx.truncate(take);
    idx
}

struct LambdaOptimizerState {
    adam: AdamState,
}

/// One optimizer step on the physical player's loss
/// `L1 = beta L_phy + w L_int` (the interaction term enters through the
/// ghost prediction gradients supplied by the caller).
#[allow(clippy::too_many_arguments)]
fn physical_step(
    physical: &mut Physical,
    realization: &Realization,
    config: &HycoConfig,
    opt: &mut LambdaOptimizerState,
    data_points: &[SpaceTimePoint],
    data_obs: &[&Vec<f64>],
    ghosts: Option<(&[SpaceTimePoint], &[Vec<f64>])>,
) -> Result<(), TrainError> {
    let data_preds = realization.predict(data_points)?;
    let mut points: Vec<SpaceTimePoint> = data_points.to_vec();
    let mut grads = data_residual_grads(&data_preds, data_obs, config.beta);
    if let Some((ghost_pts, d_phy)) = ghosts {
        points.extend_from_slice(ghost_pts);
        grads.extend(
            d_phy
                .iter()
                .map(|g| g.iter().map(|v| config.interaction_weight * v).collect()),
        );
    }
    let mut g = realization.grad(&points, &grads)?;
    let mut lambda = physical.lambda();
    if config.l2_reg_lambda > 0.0 {
        for (gi, li) in g.iter_mut().zip(&lambda) {
            *gi += 2.0 * config.l2_reg_lambda * li;
        }
    }
    if !g.iter().all(|v| v.is_finite()) {
        return Err(TrainError::NonFiniteGradient {
            model: "physical",
            lambda,
            gradient: g,
        });
    }
    match config.lambda_optimizer {
        LambdaOptimizer::Adam => adam_step(&mut lambda, &g, &mut opt.adam, config.lr_lambda)?,
        LambdaOptimizer::PlainSgd => {
            for (li, gi) in lambda.iter_mut().zip(&g) {
                *li -= config.lr_lambda * gi;
            }
        }
    }
    physical.project(&mut lambda);
    physical.set_lambda(&lambda)
}

/// One Adam step on the synthetic player's loss
/// `L2 = alpha L_syn + w L_int`.
fn synthetic_step(
    synthetic: &mut SyntheticModel,
    config: &HycoConfig,
    iter: usize,
    data_points: &[SpaceTimePoint],
    data_obs: &[&Vec<f64>],
    ghosts: Option<(&[SpaceTimePoint], &[Vec<f64>])>,
) -> Result<(), TrainError> {
    // Minibatch subsampling of the data term (full batch by default).
    let m = data_points.len();
    let (points_d, obs_d): (Vec<SpaceTimePoint>, Vec<&Vec<f64>>) = match config.minibatch {
        Some(mb) if mb < m => {
            let seed = derive_seed(derive_seed(config.seeds.data, 0x6d62), iter as u64);
            let idx = minibatch_indices(m, mb, seed);
            (
                idx.iter().map(|&i| data_points[i]).collect(),
                idx.iter().map(|&i| data_obs[i]).collect(),
            )
        }
        _ => (data_points.to_vec(), data_obs.to_vec()),
    };
    let preds = synthetic.predict(&points_d)?;
    let mut points = points_d;
    let mut grads = data_residual_grads(&preds, &obs_d, config.alpha);
    if let Some((ghost_pts, d_syn)) = ghosts {
        points.extend_from_slice(ghost_pts);
        grads.extend(
            d_syn
                .iter()
                .map(|g| g.iter().map(|v| config.interaction_weight * v).collect()),
        );
    }
    let mut g = synthetic.grad_flat(&points, &grads)?;
    if config.l2_reg_theta > 0.0 {
        let theta = synthetic.params().flatten();
        for (gi, ti) in g.iter_mut().zip(&theta) {
            *gi += 2.0 * config.l2_reg_theta * ti;
        }
    }
    if !g.iter().all(|v| v.is_finite()) {
        return Err(TrainError::NonFiniteGradient {
            model: "synthetic",
            lambda: Vec::new(),
            gradient: vec![g.iter().fold(0.0, |a, b| a + b * b).sqrt()],
        });
    }
    synthetic.apply_gradient(&g, config.lr_theta)
}

/// Core loop shared by HYCO and the baselines. The history accumulated so
/// far is preserved when an iteration fails; the error rides alongside the
/// outcome.
pub fn run(
    method: Method,
    config: &HycoConfig,
    problem: &Problem,
    mut physical: Option<Physical>,
    mut synthetic: Option<SyntheticModel>,
) -> (TrainOutcome, Option<TrainError>) {
    let start = Instant::now();
    let mut history = TrainHistory::default();
    let mut lint_track: Vec<f64> = Vec::new();

    let error = (|| -> Result<(), TrainError> {
        config.validate()?;
        match method {
            Method::Hyco => {
                if physical.is_none() {
                    return Err(TrainError::MissingModel("physical"));
                }
                if synthetic.is_none() {
                    return Err(TrainError::MissingModel("synthetic"));
                }
            }
            Method::PureNn => {
                if synthetic.is_none() {
                    return Err(TrainError::MissingModel("synthetic"));
                }
                physical = None;
            }
            Method::PhysicalOnly => {
                if physical.is_none() {
                    return Err(TrainError::MissingModel("physical"));
                }
                synthetic = None;
            }
        }
        if problem.dataset.is_empty() {
            return Err(TrainError::EmptyDataset);
        }
        problem.dataset.validate()?;

        let data_points = &problem.dataset.points;
        let data_obs: Vec<&Vec<f64>> = problem.dataset.observations.iter().collect();
        let measure = problem.domain.measure();
        let mut lambda_opt = physical.as_ref().map(|p| LambdaOptimizerState {
            adam: AdamState::new(p.param_dim()),
        });

        for k in 0..config.max_iters {
            let ghosts = sampling::sample_uniform_points(
                &problem.domain,
                config.ghost_count,
                derive_seed(config.seeds.ghost, k as u64),
            )?;

            let realization = match physical.as_ref() {
                Some(p) => Some(p.prepare(method != Method::PureNn)?),
                None => None,
            };

            // Predictions and losses at iterate k.
            let phy_data = match realization.as_ref() {
                Some(r) => Some(r.predict(data_points)?),
                None => None,
            };
            let syn_data = match synthetic.as_ref() {
                Some(s) => Some(s.predict(data_points)?),
                None => None,
            };
            let both = realization.is_some() && synthetic.is_some();
            let coupled = both && config.interaction_weight > 0.0;
            let (phy_ghost, syn_ghost) = if both {
                (
                    Some(realization.as_ref().unwrap().predict(&ghosts)?),
                    Some(synthetic.as_ref().unwrap().predict(&ghosts)?),
                )
            } else {
                (None, None)
            };

            let l_phy = match phy_data.as_ref() {
                Some(p) => Some(data_loss(p, &problem.dataset)?),
                None => None,
            };
            let l_syn = match syn_data.as_ref() {
                Some(p) => Some(data_loss(p, &problem.dataset)?),
                None => None,
            };
            let interaction = if both {
                Some(interaction_loss_mc(
                    syn_ghost.as_ref().unwrap(),
                    phy_ghost.as_ref().unwrap(),
                    measure,
                )?)
            } else {
                None
            };
            let l_int = interaction.as_ref().map(|i| i.value);
            let w = config.interaction_weight;
            let losses = LossBreakdown {
                l_phy,
                l_syn,
                l_int,
                l1: l_phy.map(|lp| config.beta * lp + w * l_int.unwrap_or(0.0)),
                l2: l_syn.map(|ls| config.alpha * ls + w * l_int.unwrap_or(0.0)),
            };

            // Metric snapshots.
            let lambda_natural = physical.as_ref().map(|p| p.lambda_natural());
            let e_p = match (problem.reference.as_ref(), lambda_natural.as_ref()) {
                (Some(r), Some(l)) => r.e_p(l),
                _ => None,
            };
            let snapshot_metrics =
                config.metric_stride > 0 && k % config.metric_stride == 0;
            let (e_s_phy, e_s_syn) = if snapshot_metrics {
                match problem.reference.as_ref() {
                    Some(r) => (
                        realization.as_ref().and_then(|re| r.e_s_physical(re)),
                        synthetic.as_ref().and_then(|s| r.e_s_synthetic(s)),
                    ),
                    None => (None, None),
                }
            } else {
                (None, None)
            };

            history.records.push(IterRecord {
                iter: k,
                losses,
                lambda: lambda_natural,
                theta_checksum: synthetic.as_ref().map(|s| s.checksum()),
                e_s_phy,
                e_s_syn,
                e_p,
            });

            // Player updates.
            if let (Some(p), Some(r)) = (physical.as_mut(), realization.as_ref()) {
                let ghost_arg = if coupled {
                    Some((
                        ghosts.as_slice(),
                        interaction.as_ref().unwrap().d_phy.as_slice(),
                    ))
                } else {
                    None
                };
                physical_step(
                    p,
                    r,
                    config,
                    lambda_opt.as_mut().unwrap(),
                    data_points,
                    &data_obs,
                    ghost_arg,
                )?;
            }

            if let Some(s) = synthetic.as_mut() {
                if coupled {
                    let d_syn_fresh;
                    let ghost_arg = match config.update_schedule {
                        UpdateSchedule::GaussSeidel => {
                            // The synthetic player sees the freshly updated
                            // physical iterate.
                            let real_next =
                                physical.as_ref().unwrap().prepare(false)?;
                            let phy_ghost_next = real_next.predict(&ghosts)?;
                            d_syn_fresh = interaction_loss_mc(
                                syn_ghost.as_ref().unwrap(),
                                &phy_ghost_next,
                                measure,
                            )?
                            .d_syn;
                            (ghosts.as_slice(), d_syn_fresh.as_slice())
                        }
                        UpdateSchedule::Jacobi => (
                            ghosts.as_slice(),
                            interaction.as_ref().unwrap().d_syn.as_slice(),
                        ),
                    };
                    synthetic_step(s, config, k, data_points, &data_obs, Some(ghost_arg))?;
                } else {
                    synthetic_step(s, config, k, data_points, &data_obs, None)?;
                }
            }

            // Stopping rule on the interaction history; only meaningful for
            // a coupled run (decoupled runs spend the full budget, keeping
            // them bitwise comparable to the standalone baselines).
            if coupled {
                lint_track.push(l_int.unwrap());
                if check_stopping(&lint_track, config.stop_tol, config.stop_window) {
                    history.stopped_at = Some(k);
                    break;
                }
            }
        }
        Ok(())
    })();

    history.wall_clock_secs = start.elapsed().as_secs_f64();
    (
        TrainOutcome {
            history,
            physical,
            synthetic,
        },
        error.err(),
    )
}

/// Player-gradient norms `(||grad L1||, ||grad L2||)` evaluated on a frozen
/// ghost set at the models' current parameters; the stationarity diagnostic
/// used when the stopping rule fires.
pub fn player_gradient_norms(
    physical: &Physical,
    synthetic: &SyntheticModel,
    problem: &Problem,
    config: &HycoConfig,
    frozen_ghosts: &[SpaceTimePoint],
) -> Result<(f64, f64), TrainError> {
    let measure = problem.domain.measure();
    let realization = physical.prepare(true)?;
    let phy_ghost = realization.predict(frozen_ghosts)?;
    let syn_ghost = synthetic.predict(frozen_ghosts)?;
    let interaction = interaction_loss_mc(&syn_ghost, &phy_ghost, measure)?;
    let data_points = &problem.dataset.points;
    let data_obs: Vec<&Vec<f64>> = problem.dataset.observations.iter().collect();
    let w = config.interaction_weight;

    // grad_Lambda L1.
    let phy_data = realization.predict(data_points)?;
    let mut points: Vec<SpaceTimePoint> = data_points.clone();
    let mut grads = data_residual_grads(&phy_data, &data_obs, config.beta);
    points.extend_from_slice(frozen_ghosts);
    grads.extend(
        interaction
            .d_phy
            .iter()
            .map(|g| g.iter().map(|v| w * v).collect::<Vec<f64>>()),
    );
    let mut g_lambda = realization.grad(&points, &grads)?;
    if config.l2_reg_lambda > 0.0 {
        for (gi, li) in g_lambda.iter_mut().zip(physical.lambda()) {
            *gi += 2.0 * config.l2_reg_lambda * li;
        }
    }

    // grad_Theta L2.
    let syn_data = synthetic.predict(data_points)?;
    let mut points_s: Vec<SpaceTimePoint> = data_points.clone();
    let mut grads_s = data_residual_grads(&syn_data, &data_obs, config.alpha);
    points_s.extend_from_slice(frozen_ghosts);
    grads_s.extend(
        interaction
            .d_syn
            .iter()
            .map(|g| g.iter().map(|v| w * v).collect::<Vec<f64>>()),
    );
    let mut g_theta = synthetic.grad_flat(&points_s, &grads_s)?;
    if config.l2_reg_theta > 0.0 {
        for (gi, ti) in g_theta.iter_mut().zip(synthetic.params().flatten()) {
            *gi += 2.0 * config.l2_reg_theta * ti;
        }
    }

    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok((norm(&g_lambda), norm(&g_theta)))
}

/// FNV fingerprint of the synthetic parameters; exposed for equivalence
/// tests.
pub fn theta_fingerprint(synthetic: &SyntheticModel) -> u64 {
    params_checksum(&synthetic.params().flatten())
}
