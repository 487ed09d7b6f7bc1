//! Adam optimizer over flat parameter vectors.
//!
//! The same update rule drives the network weights and, via the trainer, the
//! scaled physical parameters.

use crate::error::NnError;

/// First/second moment accumulators plus the step counter.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    /// Fresh state with the standard defaults beta1 = 0.9, beta2 = 0.999,
    /// epsilon = 1e-8.
    pub fn new(n_params: usize) -> Self {
        Self {
            m: vec![0.0; n_params],
            v: vec![0.0; n_params],
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }
}

/// One bias-corrected Adam step, in place.
pub fn adam_step(
    params: &mut [f64],
    grad: &[f64],
    state: &mut AdamState,
    lr: f64,
) -> Result<(), NnError> {
    if params.len() != grad.len() || params.len() != state.m.len() {
        return Err(NnError::ShapeMismatch(format!(
            "params {}, grad {}, state {}",
            params.len(),
            grad.len(),
            state.m.len()
        )));
    }
    if !grad.iter().all(|g| g.is_finite()) {
        return Err(NnError::NonFinite("gradient".into()));
    }
    if !lr.is_finite() || lr < 0.0 {
        return Err(NnError::InvalidConfig(format!("learning rate {lr}")));
    }
    state.step += 1;
    let t = state.step as i32;
    let bc1 = 1.0 - state.beta1.powi(t);
    let bc2 = 1.0 - state.beta2.powi(t);
    for i in 0..params.len() {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        let m_hat = state.m[i] / bc1;
        let v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (v_hat.sqrt() + state.epsilon);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params_and_bumps_counter() {
        let mut p = vec![1.0, -2.0];
        let mut s = AdamState::new(2);
        adam_step(&mut p, &[0.0, 0.0], &mut s, 0.1).unwrap();
        assert_eq!(p, vec![1.0, -2.0]);
        assert_eq!(s.step_count(), 1);
    }

    #[test]
    fn first_step_matches_closed_form() {
        // With fresh moments, the first update is -lr * g / (|g| + eps).
        for &g in &[0.37, -4.2, 1e-3] {
            let mut p = vec![0.0];
            let mut s = AdamState::new(1);
            let lr = 0.05;
            adam_step(&mut p, &[g], &mut s, lr).unwrap();
            let expect = -lr * g / (g.abs() + s.epsilon);
            assert!(
                (p[0] - expect).abs() < 1e-15,
                "g = {g}: got {}, expect {expect}",
                p[0]
            );
        }
    }

    #[test]
    fn two_steps_differ_from_one_doubled_step() {
        let g = 0.8;
        let lr = 0.1;
        let mut p2 = vec![0.0];
        let mut s2 = AdamState::new(1);
        adam_step(&mut p2, &[g], &mut s2, lr).unwrap();
        adam_step(&mut p2, &[g], &mut s2, lr).unwrap();

        let mut p1 = vec![0.0];
        let mut s1 = AdamState::new(1);
        adam_step(&mut p1, &[g], &mut s1, 2.0 * lr).unwrap();
        assert_ne!(p1[0], p2[0]);
    }

    #[test]
    fn non_finite_gradient_is_an_error() {
        let mut p = vec![0.0];
        let mut s = AdamState::new(1);
        assert!(adam_step(&mut p, &[f64::INFINITY], &mut s, 0.1).is_err());
    }
}
