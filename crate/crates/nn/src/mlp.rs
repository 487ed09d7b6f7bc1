//! Network definition, initialization, forward pass and reverse-mode
//! backward pass.
//!
//! Layer layout: the hidden widths from the config, then a linear output
//! layer. With `skip_connections` every hidden block after the first
//! computes `h + act(W h + b)` (the first hidden layer maps the input
//! dimension up and stays a plain layer). An empty `hidden_layers` gives a
//! single affine map `W x + b`.

use hyco_core::{sampling, SpaceTimePoint};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Relu => {
                if z > 0.0 {
                    z
                } else {
                    0.0
                }
            }
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the activation output.
    #[inline]
    fn grad_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

/// Architecture descriptor of the synthetic network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MLPConfig {
    pub input_dim: usize,
    pub output_dim: usize,
    pub hidden_layers: Vec<usize>,
    pub activation: Activation,
    pub skip_connections: bool,
    pub init_seed: u64,
}

impl MLPConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        if self.input_dim == 0 || self.output_dim == 0 {
            return Err(NnError::InvalidConfig(
                "input_dim and output_dim must be >= 1".into(),
            ));
        }
        if self.hidden_layers.iter().any(|&w| w == 0) {
            return Err(NnError::InvalidConfig("hidden widths must be >= 1".into()));
        }
        if self.skip_connections {
            // Skip blocks add the block input to the activation output, which
            // requires equal widths on connected hidden layers.
            if self.hidden_layers.windows(2).any(|w| w[0] != w[1]) {
                return Err(NnError::InvalidConfig(
                    "skip connections require equal hidden widths".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DenseLayer {
    pub in_dim: usize,
    pub out_dim: usize,
    /// Row-major `out_dim x in_dim`.
    pub w: Vec<f64>,
    pub b: Vec<f64>,
}

impl DenseLayer {
    fn zeros(in_dim: usize, out_dim: usize) -> Self {
        Self {
            in_dim,
            out_dim,
            w: vec![0.0; in_dim * out_dim],
            b: vec![0.0; out_dim],
        }
    }

    #[inline]
    fn affine_into(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for o in 0..self.out_dim {
            let row = &self.w[o * self.in_dim..(o + 1) * self.in_dim];
            let mut z = self.b[o];
            for (wi, xi) in row.iter().zip(input) {
                z += wi * xi;
            }
            out.push(z);
        }
    }
}

/// Weights and biases (theta) of the synthetic network.
#[derive(Debug, Clone)]
pub struct MLPParams {
    config: MLPConfig,
    layers: Vec<DenseLayer>,
}

/// Per-layer parameter gradients, shaped like [`MLPParams`].
#[derive(Debug, Clone)]
pub struct MLPGrads {
    pub layers: Vec<DenseLayer>,
}

impl MLPGrads {
    pub fn flatten(&self) -> Vec<f64> {
        flatten_layers(&self.layers)
    }

    pub fn l2_norm(&self) -> f64 {
        self.layers
            .iter()
            .map(|l| {
                l.w.iter().map(|v| v * v).sum::<f64>() + l.b.iter().map(|v| v * v).sum::<f64>()
            })
            .sum::<f64>()
            .sqrt()
    }
}

fn flatten_layers(layers: &[DenseLayer]) -> Vec<f64> {
    let mut out = Vec::new();
    for l in layers {
        out.extend_from_slice(&l.w);
        out.extend_from_slice(&l.b);
    }
    out
}

/// He-style initialization for relu (weights ~ N(0, 2/fan_in)), Glorot-style
/// for tanh (N(0, 2/(fan_in + fan_out))); biases zero. Deterministic per
/// `init_seed`.
pub fn init_params(config: &MLPConfig) -> Result<MLPParams, NnError> {
    config.validate()?;
    let mut rng = sampling::rng_for(config.init_seed);
    let mut dims = vec![config.input_dim];
    dims.extend_from_slice(&config.hidden_layers);
    dims.push(config.output_dim);

    let mut layers = Vec::with_capacity(dims.len() - 1);
    for win in dims.windows(2) {
        let (fan_in, fan_out) = (win[0], win[1]);
        let std = match config.activation {
            Activation::Relu => (2.0 / fan_in as f64).sqrt(),
            Activation::Tanh => (2.0 / (fan_in + fan_out) as f64).sqrt(),
        };
        let normal = Normal::new(0.0, std).expect("std is positive");
        let mut layer = DenseLayer::zeros(fan_in, fan_out);
        for w in layer.w.iter_mut() {
            *w = normal.sample(&mut rng);
        }
        layers.push(layer);
    }
    Ok(MLPParams {
        config: config.clone(),
        layers,
    })
}

impl MLPParams {
    pub fn config(&self) -> &MLPConfig {
        &self.config
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    pub(crate) fn from_layers(config: MLPConfig, layers: Vec<DenseLayer>) -> Result<Self, NnError> {
        config.validate()?;
        let mut dims = vec![config.input_dim];
        dims.extend_from_slice(&config.hidden_layers);
        dims.push(config.output_dim);
        if layers.len() + 1 != dims.len() {
            return Err(NnError::ShapeMismatch(format!(
                "expected {} layers, got {}",
                dims.len() - 1,
                layers.len()
            )));
        }
        for (l, win) in layers.iter().zip(dims.windows(2)) {
            if l.in_dim != win[0] || l.out_dim != win[1] || l.w.len() != win[0] * win[1] || l.b.len() != win[1] {
                return Err(NnError::ShapeMismatch(format!(
                    "layer shape {}x{} does not match config {}x{}",
                    l.out_dim, l.in_dim, win[1], win[0]
                )));
            }
        }
        Ok(Self { config, layers })
    }

    pub fn n_params(&self) -> usize {
        self.layers.iter().map(|l| l.w.len() + l.b.len()).sum()
    }

    /// Concatenated (weights, biases) per layer, in layer order.
    pub fn flatten(&self) -> Vec<f64> {
        flatten_layers(&self.layers)
    }

    pub fn set_from_flat(&mut self, flat: &[f64]) -> Result<(), NnError> {
        if flat.len() != self.n_params() {
            return Err(NnError::ShapeMismatch(format!(
                "expected {} parameters, got {}",
                self.n_params(),
                flat.len()
            )));
        }
        let mut off = 0;
        for l in &mut self.layers {
            let (nw, nb) = (l.w.len(), l.b.len());
            l.w.copy_from_slice(&flat[off..off + nw]);
            off += nw;
            l.b.copy_from_slice(&flat[off..off + nb]);
            off += nb;
        }
        Ok(())
    }

    /// True for hidden layer `l` when the skip shortcut applies.
    #[inline]
    fn has_skip(&self, layer: usize) -> bool {
        self.config.skip_connections && layer > 0 && layer < self.layers.len() - 1
    }

    fn map_point(&self, p: &SpaceTimePoint, out: &mut Vec<f64>) -> Result<(), NnError> {
        out.clear();
        match self.config.input_dim {
            2 => out.extend_from_slice(&[p.x, p.y]),
            3 => out.extend_from_slice(&[p.x, p.y, p.t]),
            d => {
                return Err(NnError::ShapeMismatch(format!(
                    "cannot map a space-time point onto input_dim {d}"
                )))
            }
        }
        Ok(())
    }

    /// Forward pass over a batch of space-time points; input_dim 2 maps
    /// (x, y), input_dim 3 maps (x, y, t).
    pub fn forward(&self, batch: &[SpaceTimePoint]) -> Result<Vec<Vec<f64>>, NnError> {
        let mut raw = Vec::new();
        let mut out = Vec::with_capacity(batch.len());
        for p in batch {
            self.map_point(p, &mut raw)?;
            out.push(self.forward_raw(&raw)?);
        }
        Ok(out)
    }

    /// Forward pass for one raw input vector.
    pub fn forward_raw(&self, input: &[f64]) -> Result<Vec<f64>, NnError> {
        if input.len() != self.config.input_dim {
            return Err(NnError::ShapeMismatch(format!(
                "input has {} values, config expects {}",
                input.len(),
                self.config.input_dim
            )));
        }
        if !input.iter().all(|v| v.is_finite()) {
            return Err(NnError::NonFinite("network input".into()));
        }
        let n_layers = self.layers.len();
        let mut h = input.to_vec();
        let mut z = Vec::new();
        for (l, layer) in self.layers.iter().enumerate() {
            layer.affine_into(&h, &mut z);
            if l == n_layers - 1 {
                // Linear output layer.
                return Ok(z);
            }
            if self.has_skip(l) {
                for (hi, zi) in h.iter_mut().zip(&z) {
                    *hi += self.config.activation.apply(*zi);
                }
            } else {
                h.clear();
                h.extend(z.iter().map(|&zi| self.config.activation.apply(zi)));
            }
        }
        // No layers cannot happen: there is always at least the output layer.
        Ok(h)
    }

    /// Exact reverse-mode gradient of the scalar loss whose per-sample
    /// output gradients are supplied in `out_grads`.
    ///
    /// Parameter gradients are summed over the batch in batch order; the
    /// caller folds any 1/M or weight factors into `out_grads`.
    pub fn backward(
        &self,
        batch: &[SpaceTimePoint],
        out_grads: &[Vec<f64>],
    ) -> Result<MLPGrads, NnError> {
        let mut raw_batch = Vec::with_capacity(batch.len());
        let mut raw = Vec::new();
        for p in batch {
            self.map_point(p, &mut raw)?;
            raw_batch.push(raw.clone());
        }
        let refs: Vec<&[f64]> = raw_batch.iter().map(|v| v.as_slice()).collect();
        self.backward_raw(&refs, out_grads)
    }

    /// [`Self::backward`] over raw input vectors.
    pub fn backward_raw(
        &self,
        inputs: &[&[f64]],
        out_grads: &[Vec<f64>],
    ) -> Result<MLPGrads, NnError> {
        if inputs.len() != out_grads.len() {
            return Err(NnError::ShapeMismatch(format!(
                "{} inputs vs {} output gradients",
                inputs.len(),
                out_grads.len()
            )));
        }
        let mut grads = MLPGrads {
            layers: self
                .layers
                .iter()
                .map(|l| DenseLayer::zeros(l.in_dim, l.out_dim))
                .collect(),
        };
        // Per-sample caches, reused across the batch.
        let n_layers = self.layers.len();
        let mut block_inputs: Vec<Vec<f64>> = vec![Vec::new(); n_layers];
        let mut acts: Vec<Vec<f64>> = vec![Vec::new(); n_layers - 1];
        let mut z = Vec::new();

        for (input, g_out) in inputs.iter().zip(out_grads) {
            if g_out.len() != self.config.output_dim {
                return Err(NnError::ShapeMismatch(format!(
                    "output gradient has {} values, config expects {}",
                    g_out.len(),
                    self.config.output_dim
                )));
            }
            if input.len() != self.config.input_dim {
                return Err(NnError::ShapeMismatch(format!(
                    "input has {} values, config expects {}",
                    input.len(),
                    self.config.input_dim
                )));
            }
            // Forward with caches.
            let mut h = input.to_vec();
            for l in 0..n_layers {
                block_inputs[l].clear();
                block_inputs[l].extend_from_slice(&h);
                if l == n_layers - 1 {
                    break;
                }
                self.layers[l].affine_into(&h, &mut z);
                acts[l].clear();
                acts[l].extend(z.iter().map(|&zi| self.config.activation.apply(zi)));
                if self.has_skip(l) {
                    for (hi, ai) in h.iter_mut().zip(&acts[l]) {
                        *hi += ai;
                    }
                } else {
                    h.clear();
                    h.extend_from_slice(&acts[l]);
                }
            }

            // Backward. `g` holds dL/d(block output) of the current layer.
            let mut g: Vec<f64> = g_out.clone();
            let mut g_prev = Vec::new();
            for l in (0..n_layers).rev() {
                let layer = &self.layers[l];
                let gl = &mut grads.layers[l];
                let h_in = &block_inputs[l];
                let last = l == n_layers - 1;

                // dL/dz: through the activation for hidden layers, identity
                // for the linear output layer.
                let dz: Vec<f64> = if last {
                    g.clone()
                } else {
                    g.iter()
                        .zip(&acts[l])
                        .map(|(gi, &ai)| gi * self.config.activation.grad_from_output(ai))
                        .collect()
                };

                for o in 0..layer.out_dim {
                    gl.b[o] += dz[o];
                    let row = &mut gl.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (wi, xi) in row.iter_mut().zip(h_in) {
                        *wi += dz[o] * xi;
                    }
                }

                if l == 0 {
                    break;
                }
                // dL/d(h_in) = W^T dz, plus the pass-through for skip blocks.
                g_prev.clear();
                g_prev.resize(layer.in_dim, 0.0);
                for o in 0..layer.out_dim {
                    let row = &layer.w[o * layer.in_dim..(o + 1) * layer.in_dim];
                    for (gp, wi) in g_prev.iter_mut().zip(row) {
                        *gp += wi * dz[o];
                    }
                }
                if self.has_skip(l) && !last {
                    for (gp, gi) in g_prev.iter_mut().zip(&g) {
                        *gp += gi;
                    }
                }
                std::mem::swap(&mut g, &mut g_prev);
            }
        }
        Ok(grads)
    }
}
