//! Scratch harness for desk-scale preset calibration. Not part of the
//! deliverable surface; run with
//! `cargo run --release -p hyco-trainer --example tune -- <experiment>`.

use std::sync::Arc;
use std::time::Instant;

use hyco_core::{build_dataset, BoundaryKind, Grid2D, Rect, Region, ScalarField};
use hyco_nn::{Activation, MLPConfig};
use hyco_physics::{
    compute_forcing, gray_scott_initial_state, reference_solution, simulate_gray_scott,
    GrayScottParams, HelmholtzParams,
};
use hyco_trainer::{
    run_baseline, train, GrayScottModel, HelmholtzModel, HycoConfig, Method, Physical, Problem,
    ReferenceSolution, Seeds, SyntheticModel,
};
use rand::Rng;

fn helm_problem(n: usize, m: usize, seed: u64, region: Rect) -> (Problem, Grid2D) {
    let pi = std::f64::consts::PI;
    let grid = Grid2D::new(n, n, -pi, pi, -pi, pi, BoundaryKind::DirichletZero).unwrap();
    struct Analytic;
    impl hyco_core::Evaluable for Analytic {
        fn n_components(&self) -> usize {
            1
        }
        fn domain(&self) -> Region {
            let pi = std::f64::consts::PI;
            Region::spatial(Rect::new(-pi, pi, -pi, pi))
        }
        fn eval(&self, p: &hyco_core::SpaceTimePoint) -> Result<Vec<f64>, hyco_core::CoreError> {
            Ok(vec![reference_solution(p.x, p.y)])
        }
    }
    let dataset = build_dataset(&Analytic, &Region::spatial(region), m, seed, 0.0).unwrap();
    let field = ScalarField::from_fn(grid, reference_solution).unwrap();
    (
        Problem {
            dataset,
            domain: Region::spatial(Rect::new(-pi, pi, -pi, pi)),
            reference: Some(ReferenceSolution::Helmholtz {
                field,
                truth: Some(HelmholtzParams::GROUND_TRUTH.to_vec().to_vec()),
            }),
        },
        grid,
    )
}

fn random_helm_init(seed: u64) -> HelmholtzParams {
    let mut rng = hyco_core::sampling::rng_for(seed);
    HelmholtzParams {
        alpha1: rng.gen_range(0.0..2.0),
        c1x: rng.gen_range(-2.0..2.0),
        c1y: rng.gen_range(-2.0..2.0),
        alpha2: rng.gen_range(0.0..2.0),
        c2x: rng.gen_range(-2.0..2.0),
        c2y: rng.gen_range(-2.0..2.0),
    }
}

fn helm_run(
    method: Method,
    region: Rect,
    seed: u64,
    cfg_mut: impl Fn(&mut HycoConfig),
) -> (f64, Option<usize>, f64) {
    let seeds = Seeds::from_master(seed);
    let (problem, grid) = helm_problem(48, 25, seeds.data, region);
    let forcing = compute_forcing(&grid, &HelmholtzParams::GROUND_TRUTH).unwrap();
    let init = random_helm_init(hyco_core::derive_seed(seeds.init, 1));
    let physical = Physical::Helmholtz(HelmholtzModel::new(forcing, init));
    let nn_config = MLPConfig {
        input_dim: 2,
        output_dim: 1,
        hidden_layers: vec![128, 128],
        activation: Activation::Relu,
        skip_connections: true,
        init_seed: hyco_core::derive_seed(seeds.init, 0),
    };
    let synthetic = SyntheticModel::new(&nn_config, &problem.domain).unwrap();
    let mut config = HycoConfig {
        ghost_count: 200,
        max_iters: 8000,
        lr_theta: 3e-3,
        lr_lambda: 1.5e-2,
        interaction_weight: 0.3,
        seeds,
        metric_stride: 0,
        ..HycoConfig::default()
    };
    cfg_mut(&mut config);
    let t = Instant::now();
    let (out, err) = match method {
        Method::Hyco => train(&config, &problem, physical, synthetic),
        Method::PhysicalOnly => {
            run_baseline(Method::PhysicalOnly, &config, &problem, Some(physical), None)
        }
        Method::PureNn => run_baseline(Method::PureNn, &config, &problem, None, Some(synthetic)),
    };
    if let Some(e) = err {
        eprintln!("seed {seed}: ERROR {e}");
        return (f64::NAN, None, t.elapsed().as_secs_f64());
    }
    let lam = out.physical.as_ref().map(|p| p.lambda_natural());
    let e_p = lam
        .map(|l| {
            hyco_core::parameter_error(&l, &HelmholtzParams::GROUND_TRUTH.to_vec()).unwrap()
        })
        .unwrap_or(f64::NAN);
    (e_p, out.history.stopped_at, t.elapsed().as_secs_f64())
}

fn gs_run(method: Method, seed: u64, cfg_mut: impl Fn(&mut HycoConfig)) -> (Vec<f64>, f64, f64, f64) {
    let seeds = Seeds::from_master(seed);
    let grid = Grid2D::new(32, 32, 0.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).unwrap();
    let init = gray_scott_initial_state(&grid).unwrap();
    let truth = GrayScottParams::GROUND_TRUTH;
    let reference = Arc::new(simulate_gray_scott(&truth, &init, 1000, 0.4, 5, false).unwrap());
    let domain = Region::space_time(Rect::new(0.0, 1.0, 0.0, 1.0), 0.0, 400.0);
    let dataset = build_dataset(reference.as_ref(), &domain, 1000, seeds.data, 0.0).unwrap();
    let problem = Problem {
        dataset,
        domain,
        reference: Some(ReferenceSolution::GrayScott {
            trajectory: reference.clone(),
            truth: Some(vec![truth.d_u, truth.d_v]),
        }),
    };
    let start = GrayScottParams {
        d_u: 1e-6,
        d_v: 0.5e-6,
        ..truth
    };
    let physical = Physical::GrayScott(GrayScottModel::new(init, 1000, 0.4, 5, start));
    let nn_config = MLPConfig {
        input_dim: 3,
        output_dim: 2,
        hidden_layers: vec![64, 64],
        activation: Activation::Relu,
        skip_connections: false,
        init_seed: hyco_core::derive_seed(seeds.init, 0),
    };
    let synthetic = SyntheticModel::new(&nn_config, &problem.domain).unwrap();
    let mut config = HycoConfig {
        ghost_count: 300,
        max_iters: 200,
        lr_theta: 2e-3,
        lr_lambda: 2e-2,
        interaction_weight: 1e-3,
        seeds,
        metric_stride: 0,
        ..HycoConfig::default()
    };
    cfg_mut(&mut config);
    let t = Instant::now();
    let (out, err) = match method {
        Method::Hyco => train(&config, &problem, physical, synthetic),
        Method::PhysicalOnly => {
            run_baseline(Method::PhysicalOnly, &config, &problem, Some(physical), None)
        }
        Method::PureNn => run_baseline(Method::PureNn, &config, &problem, None, Some(synthetic)),
    };
    if let Some(e) = err {
        eprintln!("gs seed {seed}: ERROR {e}");
        return (vec![f64::NAN; 2], f64::NAN, f64::NAN, t.elapsed().as_secs_f64());
    }
    let lam = out
        .physical
        .as_ref()
        .map(|p| p.lambda_natural())
        .unwrap_or_default();
    let reference_sol = problem.reference.as_ref().unwrap();
    let e_s_phy = out
        .physical
        .as_ref()
        .map(|p| {
            let r = p.prepare(false).unwrap();
            reference_sol.e_s_physical(&r).unwrap()
        })
        .unwrap_or(f64::NAN);
    let e_s_syn = out
        .synthetic
        .as_ref()
        .and_then(|s| reference_sol.e_s_synthetic(s))
        .unwrap_or(f64::NAN);
    (lam, e_s_phy, e_s_syn, t.elapsed().as_secs_f64())
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let what = args.first().map(String::as_str).unwrap_or("helm_q2");
    let pi = std::f64::consts::PI;
    match what {
        "helm_omega" => {
            for seed in 1..=3u64 {
                let (ep_f, _, dt_f) =
                    helm_run(Method::PhysicalOnly, Rect::new(-pi, pi, -pi, pi), seed, |_| {});
                let (ep_h, stop, dt_h) =
                    helm_run(Method::Hyco, Rect::new(-pi, pi, -pi, pi), seed, |_| {});
                println!("omega seed {seed}: phys_only e_p {ep_f:.4} ({dt_f:.0}s), hyco e_p {ep_h:.4} ({dt_h:.0}s, stop {stop:?})");
            }
        }
        "helm_q2" => {
            let lam_int: f64 = args
                .get(1)
                .and_then(|s| s.parse().ok())
                .unwrap_or(1.0);
            let mut h = Vec::new();
            let mut f = Vec::new();
            for seed in 1..=5u64 {
                let (ep_f, _, dt_f) =
                    helm_run(Method::PhysicalOnly, Rect::new(0.0, pi, 0.0, pi), seed, |c| {
                        c.interaction_weight = lam_int;
                    });
                let (ep_h, stop, dt_h) =
                    helm_run(Method::Hyco, Rect::new(0.0, pi, 0.0, pi), seed, |c| {
                        c.interaction_weight = lam_int;
                    });
                println!("q2 seed {seed}: phys_only e_p {ep_f:.4} ({dt_f:.0}s), hyco e_p {ep_h:.4} ({dt_h:.0}s, stop {stop:?})");
                h.push(ep_h);
                f.push(ep_f);
            }
            h.sort_by(f64::total_cmp);
            f.sort_by(f64::total_cmp);
            println!("medians: hyco {:.4}, phys_only {:.4}", h[2], f[2]);
        }
        "gs_phys" => {
            let lam_int: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.0);
            let lr: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2e-2);
            let iters: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200);
            for seed in 1..=5u64 {
                let (lam, _es_p, _es_s, dt) = gs_run(Method::PhysicalOnly, seed, |c| {
                    c.interaction_weight = lam_int;
                    c.lr_lambda = lr;
                    c.max_iters = iters;
                });
                let (du_err, dv_err) = (
                    (lam[0] - 2e-6).abs() / 2e-6,
                    (lam[1] - 0.8e-6).abs() / 0.8e-6,
                );
                println!(
                    "gs_phys seed {seed}: D=({:.4e},{:.4e}) err ({du_err:.3},{dv_err:.3}) ({dt:.0}s)",
                    lam[0], lam[1]
                );
            }
        }
        "gs" => {
            let lam_int: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1e-3);
            let lr: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(2e-2);
            let iters: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200);
            for seed in 1..=5u64 {
                let (lam, es_p, _es_s, dt) = gs_run(Method::Hyco, seed, |c| {
                    c.interaction_weight = lam_int;
                    c.lr_lambda = lr;
                    c.max_iters = iters;
                });
                let (du_err, dv_err) = (
                    (lam[0] - 2e-6).abs() / 2e-6,
                    (lam[1] - 0.8e-6).abs() / 0.8e-6,
                );
                let (_, _, es_nn, dt_nn) = gs_run(Method::PureNn, seed, |c| {
                    c.max_iters = iters;
                });
                println!(
                    "gs seed {seed}: D=({:.4e},{:.4e}) err ({du_err:.3},{dv_err:.3}), e_s phys {es_p:.4} vs nn {es_nn:.4} ({dt:.0}s + {dt_nn:.0}s)",
                    lam[0], lam[1]
                );
            }
        }
        "helm_trace" => {
            let lam_int: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.03);
            let seed: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5);
            let pi = std::f64::consts::PI;
            let seeds = Seeds::from_master(seed);
            let (problem, grid) = helm_problem(48, 25, seeds.data, Rect::new(0.0, pi, 0.0, pi));
            let forcing = compute_forcing(&grid, &HelmholtzParams::GROUND_TRUTH).unwrap();
            let init = random_helm_init(hyco_core::derive_seed(seeds.init, 1));
            println!("init params: {:?} e_p {:.3}", init.to_vec(),
                hyco_core::parameter_error(&init.to_vec(), &HelmholtzParams::GROUND_TRUTH.to_vec()).unwrap());
            let physical = Physical::Helmholtz(HelmholtzModel::new(forcing, init));
            let lr_t: f64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1e-3);
            let lr_l: f64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1e-2);
            let alpha: f64 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(1.0);
            let beta: f64 = args.get(6).and_then(|s| s.parse().ok()).unwrap_or(1.0);
            let width: usize = args.get(7).and_then(|s| s.parse().ok()).unwrap_or(64);
            let wd: f64 = args.get(8).and_then(|s| s.parse().ok()).unwrap_or(0.0);
            let iters: usize = args.get(9).and_then(|s| s.parse().ok()).unwrap_or(2000);
            let config = HycoConfig {
                ghost_count: 200, max_iters: iters, lr_theta: lr_t, lr_lambda: lr_l,
                interaction_weight: lam_int, alpha, beta, l2_reg_theta: wd, seeds,
                metric_stride: 100,
                ..HycoConfig::default()
            };
            let nn_config = MLPConfig {
                input_dim: 2, output_dim: 1, hidden_layers: vec![width, width],
                activation: Activation::Relu, skip_connections: true,
                init_seed: hyco_core::derive_seed(seeds.init, 0),
            };
            let synthetic = SyntheticModel::new(&nn_config, &problem.domain).unwrap();
            let (out, err) = train(&config, &problem, physical, synthetic);
            assert!(err.is_none(), "{err:?}");
            for r in out.history.records.iter().step_by(250) {
                println!("k={:4} L_syn {:.3e} L_phy {:.3e} L_int {:.3e} e_p {:.3} e_s_syn {:?} e_s_phy {:?}",
                    r.iter,
                    r.losses.l_syn.unwrap_or(f64::NAN),
                    r.losses.l_phy.unwrap_or(f64::NAN),
                    r.losses.l_int.unwrap_or(f64::NAN),
                    r.e_p.unwrap_or(f64::NAN),
                    r.e_s_syn, r.e_s_phy);
            }
            let last = out.history.records.last().unwrap();
            println!("final: e_p {:?} lambda {:?}", last.e_p, last.lambda);
        }
        other => eprintln!("unknown experiment {other}"),
    }
}
