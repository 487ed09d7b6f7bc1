//! Normalized error metrics.

use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Normalized L2 error `||pred - ref||_2 / ||ref||_2` over matching value
/// arrays (grid nodes, stacked trajectory snapshots, or any flattened shape
/// shared by both arguments).
pub fn normalized_l2_error(pred: &[f64], reference: &[f64]) -> Result<f64, CoreError> {
    if pred.len() != reference.len() {
        return Err(CoreError::ShapeMismatch(format!(
            "pred has {} values, reference {}",
            pred.len(),
            reference.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (p, r) in pred.iter().zip(reference) {
        num += (p - r) * (p - r);
        den += r * r;
    }
    if den <= 0.0 {
        return Err(CoreError::ZeroNormReference);
    }
    Ok((num / den).sqrt())
}

/// Relative Euclidean parameter error `||lambda - truth||_2 / ||truth||_2`.
pub fn parameter_error(lambda: &[f64], truth: &[f64]) -> Result<f64, CoreError> {
    normalized_l2_error(lambda, truth)
}

/// Per-model error summary attached to run outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub model: String,
    /// Normalized L2 solution error on the full reference grid; `None` when
    /// the model produces no field.
    pub e_s: Option<f64>,
    /// Relative parameter error; `None` for models without physical
    /// parameters.
    pub e_p: Option<f64>,
}

impl MetricsRecord {
    pub fn validate(&self) -> Result<(), CoreError> {
        for (name, v) in [("e_s", self.e_s), ("e_p", self.e_p)] {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 {
                    return Err(CoreError::NonFinite(format!("{name} = {v}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_for_identical_and_one_for_doubled() {
        let r = vec![1.0, -2.0, 3.0];
        assert_eq!(normalized_l2_error(&r, &r).unwrap(), 0.0);
        let doubled: Vec<f64> = r.iter().map(|v| 2.0 * v).collect();
        assert!((normalized_l2_error(&doubled, &r).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_computed_values() {
        let reference = [3.0, 4.0];
        assert!((normalized_l2_error(&[0.0, 0.0], &reference).unwrap() - 1.0).abs() < 1e-15);
        assert!((normalized_l2_error(&[3.0, 0.0], &reference).unwrap() - 4.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn zero_norm_reference_errors() {
        assert!(matches!(
            normalized_l2_error(&[1.0], &[0.0]),
            Err(CoreError::ZeroNormReference)
        ));
    }

    #[test]
    fn parameter_error_trivial_cases() {
        let truth = [2e-6, 0.8e-6];
        assert_eq!(parameter_error(&truth, &truth).unwrap(), 0.0);
        let doubled = [4e-6, 1.6e-6];
        assert!((parameter_error(&doubled, &truth).unwrap() - 1.0).abs() < 1e-12);
    }
}
