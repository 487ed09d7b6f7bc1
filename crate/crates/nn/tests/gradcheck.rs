//! Gradient oracle and structural properties of the network.
//!
//! The backward pass is validated against central finite differences of a
//! scalar loss; the smooth (tanh) activation is used for the tight oracle,
//! matching how the FD step interacts with kink-free surfaces.

use hyco_core::sampling;
use hyco_nn::{adam_step, init_params, AdamState, Activation, MLPConfig, MLPParams};
use proptest::prelude::*;
use rand::Rng;

/// Scalar test loss: L = sum_i c_i . y_i over the batch outputs.
fn loss_value(params: &MLPParams, inputs: &[Vec<f64>], coefs: &[Vec<f64>]) -> f64 {
    inputs
        .iter()
        .zip(coefs)
        .map(|(x, c)| {
            let y = params.forward_raw(x).unwrap();
            y.iter().zip(c).map(|(yi, ci)| yi * ci).sum::<f64>()
        })
        .sum()
}

fn fd_gradient(params: &MLPParams, inputs: &[Vec<f64>], coefs: &[Vec<f64>], h: f64) -> Vec<f64> {
    let flat = params.flatten();
    let mut probe = params.clone();
    let mut grad = Vec::with_capacity(flat.len());
    for i in 0..flat.len() {
        let mut bumped = flat.clone();
        bumped[i] = flat[i] + h;
        probe.set_from_flat(&bumped).unwrap();
        let lp = loss_value(&probe, inputs, coefs);
        bumped[i] = flat[i] - h;
        probe.set_from_flat(&bumped).unwrap();
        let lm = loss_value(&probe, inputs, coefs);
        grad.push((lp - lm) / (2.0 * h));
    }
    grad
}

fn max_rel_discrepancy(analytic: &[f64], fd: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(fd)
        .map(|(a, f)| (a - f).abs() / a.abs().max(f.abs()).max(1e-4))
        .fold(0.0, f64::max)
}

#[test]
fn backward_matches_central_differences_on_2_3_1_tanh_net() {
    let config = MLPConfig {
        input_dim: 2,
        output_dim: 1,
        hidden_layers: vec![3],
        activation: Activation::Tanh,
        skip_connections: false,
        init_seed: 7,
    };
    let params = init_params(&config).unwrap();
    let inputs = vec![vec![0.3, -0.7], vec![-0.1, 0.9], vec![0.5, 0.5]];
    let coefs = vec![vec![1.0], vec![1.0], vec![1.0]];
    let refs: Vec<&[f64]> = inputs.iter().map(|v| v.as_slice()).collect();
    let analytic = params.backward_raw(&refs, &coefs).unwrap().flatten();
    let fd = fd_gradient(&params, &inputs, &coefs, 1e-6);
    let rel = max_rel_discrepancy(&analytic, &fd);
    assert!(rel < 1e-5, "max relative discrepancy {rel}");
}

/// 100 random small instances (<= 50 parameters), spanning depths, widths,
/// output dims and skip wiring; every component of the reverse-mode gradient
/// agrees with central differences to better than 1e-5 relative.
#[test]
fn gradient_oracle_100_random_instances() {
    let mut rng = sampling::rng_for(20240);
    let mut worst = 0.0f64;
    for instance in 0..100 {
        let input_dim = rng.gen_range(1..=3usize);
        let output_dim = rng.gen_range(1..=2usize);
        let depth = rng.gen_range(0..=2usize);
        let width = rng.gen_range(2..=4usize);
        let config = MLPConfig {
            input_dim,
            output_dim,
            hidden_layers: vec![width; depth],
            activation: Activation::Tanh,
            skip_connections: depth >= 2 && rng.gen_bool(0.5),
            init_seed: rng.gen(),
        };
        let params = init_params(&config).unwrap();
        assert!(params.n_params() <= 50, "instance {instance} too large");

        let batch = rng.gen_range(1..=4usize);
        let inputs: Vec<Vec<f64>> = (0..batch)
            .map(|_| (0..input_dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let coefs: Vec<Vec<f64>> = (0..batch)
            .map(|_| {
                (0..output_dim)
                    .map(|_| rng.gen_range(0.5..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect();
        let refs: Vec<&[f64]> = inputs.iter().map(|v| v.as_slice()).collect();
        let analytic = params.backward_raw(&refs, &coefs).unwrap().flatten();
        let fd = fd_gradient(&params, &inputs, &coefs, 1e-6);
        let rel = max_rel_discrepancy(&analytic, &fd);
        assert!(
            rel < 1e-5,
            "instance {instance} ({config:?}): max relative discrepancy {rel}"
        );
        worst = worst.max(rel);
    }
    println!("gradient oracle over 100 instances: worst relative discrepancy {worst:.3e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A bias-free single-hidden-layer relu net is positively homogeneous of
    /// degree 1: forward(c x) = c forward(x) for c > 0.
    #[test]
    fn relu_net_positively_homogeneous(
        x0 in -1.0f64..1.0,
        x1 in -1.0f64..1.0,
        c in 0.01f64..10.0,
        seed in 0u64..1000,
    ) {
        let config = MLPConfig {
            input_dim: 2,
            output_dim: 1,
            hidden_layers: vec![6],
            activation: Activation::Relu,
            skip_connections: false,
            init_seed: seed,
        };
        let params = init_params(&config).unwrap(); // biases are zero by init
        let y = params.forward_raw(&[x0, x1]).unwrap()[0];
        let yc = params.forward_raw(&[c * x0, c * x1]).unwrap()[0];
        prop_assert!((yc - c * y).abs() <= 1e-12 * (1.0 + y.abs() * c));
    }
}

/// (config, seed, data order) fully determine the training trajectory.
#[test]
fn training_trajectory_is_deterministic() {
    let config = MLPConfig {
        input_dim: 2,
        output_dim: 1,
        hidden_layers: vec![8, 8],
        activation: Activation::Relu,
        skip_connections: false,
        init_seed: 99,
    };
    let data: Vec<(Vec<f64>, f64)> = (0..16)
        .map(|i| {
            let x = i as f64 / 16.0;
            (vec![x, 1.0 - x], (x * 3.0).sin())
        })
        .collect();

    let run = || {
        let mut params = init_params(&config).unwrap();
        let mut state = AdamState::new(params.n_params());
        for _ in 0..25 {
            let inputs: Vec<&[f64]> = data.iter().map(|(x, _)| x.as_slice()).collect();
            let out_grads: Vec<Vec<f64>> = data
                .iter()
                .map(|(x, y)| {
                    let pred = params.forward_raw(x).unwrap()[0];
                    vec![2.0 * (pred - y) / data.len() as f64]
                })
                .collect();
            let grads = params.backward_raw(&inputs, &out_grads).unwrap().flatten();
            let mut flat = params.flatten();
            adam_step(&mut flat, &grads, &mut state, 1e-2).unwrap();
            params.set_from_flat(&flat).unwrap();
        }
        params.flatten()
    };
    let a = run();
    let b = run();
    assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
}
