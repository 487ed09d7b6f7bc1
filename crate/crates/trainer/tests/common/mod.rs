//! Shared fixtures: small desk problems that run in well under a second.

use std::sync::Arc;

use hyco_core::{build_dataset, BoundaryKind, Dataset, Grid2D, Rect, Region, ScalarField};
use hyco_nn::{Activation, MLPConfig};
use hyco_physics::{
    compute_forcing, gray_scott_initial_state, reference_solution, simulate_gray_scott,
    GrayScottParams, HelmholtzParams, Trajectory,
};
use hyco_trainer::{
    GrayScottModel, HelmholtzModel, HycoConfig, Physical, Problem, ReferenceSolution, Seeds,
    SyntheticModel,
};

pub const GS_STEPS: usize = 60;
pub const GS_DT: f64 = 0.4;

pub fn gs_grid(n: usize) -> Grid2D {
    Grid2D::new(n, n, 0.0, 1.0, 0.0, 1.0, BoundaryKind::Periodic).unwrap()
}

pub fn gs_reference(n: usize) -> Arc<Trajectory> {
    let init = gray_scott_initial_state(&gs_grid(n)).unwrap();
    Arc::new(
        simulate_gray_scott(&GrayScottParams::GROUND_TRUTH, &init, GS_STEPS, GS_DT, 2, false)
            .unwrap(),
    )
}

pub fn gs_problem(n: usize, m: usize, seed: u64) -> (Problem, Arc<Trajectory>) {
    let reference = gs_reference(n);
    let domain = Region::space_time(
        Rect::new(0.0, 1.0, 0.0, 1.0),
        0.0,
        GS_STEPS as f64 * GS_DT,
    );
    let dataset: Dataset = build_dataset(reference.as_ref(), &domain, m, seed, 0.0).unwrap();
    let truth = GrayScottParams::GROUND_TRUTH;
    (
        Problem {
            dataset,
            domain,
            reference: Some(ReferenceSolution::GrayScott {
                trajectory: reference.clone(),
                truth: Some(vec![truth.d_u, truth.d_v]),
            }),
        },
        reference,
    )
}

pub fn gs_physical(n: usize) -> Physical {
    let init = gray_scott_initial_state(&gs_grid(n)).unwrap();
    let start = GrayScottParams {
        d_u: 1e-6,
        d_v: 0.5e-6,
        ..GrayScottParams::GROUND_TRUTH
    };
    Physical::GrayScott(GrayScottModel::new(init, GS_STEPS, GS_DT, 2, start))
}

pub fn gs_synthetic(problem: &Problem, seed: u64) -> SyntheticModel {
    let config = MLPConfig {
        input_dim: 3,
        output_dim: 2,
        hidden_layers: vec![16, 16],
        activation: Activation::Relu,
        skip_connections: false,
        init_seed: seed,
    };
    SyntheticModel::new(&config, &problem.domain).unwrap()
}

pub fn helm_grid(n: usize) -> Grid2D {
    let pi = std::f64::consts::PI;
    Grid2D::new(n, n, -pi, pi, -pi, pi, BoundaryKind::DirichletZero).unwrap()
}

pub struct HelmFixture {
    pub problem: Problem,
    pub grid: Grid2D,
}

pub fn helm_problem(n: usize, m: usize, seed: u64, region: Rect) -> HelmFixture {
    let grid = helm_grid(n);
    let pi = std::f64::consts::PI;

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
    let truth = HelmholtzParams::GROUND_TRUTH.to_vec().to_vec();
    HelmFixture {
        problem: Problem {
            dataset,
            domain: Region::spatial(Rect::new(-pi, pi, -pi, pi)),
            reference: Some(ReferenceSolution::Helmholtz {
                field,
                truth: Some(truth),
            }),
        },
        grid,
    }
}

pub fn helm_physical(grid: &Grid2D, start: HelmholtzParams) -> Physical {
    let forcing = compute_forcing(grid, &HelmholtzParams::GROUND_TRUTH).unwrap();
    Physical::Helmholtz(HelmholtzModel::new(forcing, start))
}

pub fn helm_synthetic(problem: &Problem, seed: u64) -> SyntheticModel {
    let config = MLPConfig {
        input_dim: 2,
        output_dim: 1,
        hidden_layers: vec![16, 16],
        activation: Activation::Relu,
        skip_connections: true,
        init_seed: seed,
    };
    SyntheticModel::new(&config, &problem.domain).unwrap()
}

pub fn quick_config(iters: usize, master_seed: u64) -> HycoConfig {
    HycoConfig {
        ghost_count: 32,
        max_iters: iters,
        seeds: Seeds::from_master(master_seed),
        ..HycoConfig::default()
    }
}
