//! Data-fit and interaction losses.

use hyco_core::Dataset;

use crate::error::TrainError;

/// Mean squared error over the dataset: `(1/M) sum ||pred_i - obs_i||^2`.
pub fn data_loss(predictions: &[Vec<f64>], dataset: &Dataset) -> Result<f64, TrainError> {
    if dataset.is_empty() {
        return Err(TrainError::EmptyDataset);
    }
    if predictions.len() != dataset.len() {
        return Err(TrainError::ShapeMismatch(format!(
            "{} predictions for {} observations",
            predictions.len(),
            dataset.len()
        )));
    }
    let mut acc = 0.0;
    for (pred, obs) in predictions.iter().zip(&dataset.observations) {
        if pred.len() != obs.len() {
            return Err(TrainError::ShapeMismatch(format!(
                "prediction has {} components, observation {}",
                pred.len(),
                obs.len()
            )));
        }
        for (p, o) in pred.iter().zip(obs) {
            acc += (p - o) * (p - o);
        }
    }
    Ok(acc / dataset.len() as f64)
}

/// Monte Carlo interaction estimate and its prediction gradients.
#[derive(Debug, Clone)]
pub struct InteractionLoss {
    /// `(|Omega| / H) sum_h ||syn(x_h) - phy(x_h)||^2`.
    pub value: f64,
    /// d value / d syn_pred: `(2 |Omega| / H) (syn - phy)` per ghost.
    pub d_syn: Vec<Vec<f64>>,
    /// d value / d phy_pred: the negative of `d_syn`.
    pub d_phy: Vec<Vec<f64>>,
}

/// Ghost-point estimator of the interaction integral over a domain of
/// measure `domain_measure` (space-time measure for dynamic problems).
pub fn interaction_loss_mc(
    syn_preds: &[Vec<f64>],
    phy_preds: &[Vec<f64>],
    domain_measure: f64,
) -> Result<InteractionLoss, TrainError> {
    if syn_preds.len() != phy_preds.len() {
        return Err(TrainError::ShapeMismatch(format!(
            "{} synthetic vs {} physical ghost predictions",
            syn_preds.len(),
            phy_preds.len()
        )));
    }
    if syn_preds.is_empty() {
        return Err(TrainError::ShapeMismatch("empty ghost set".into()));
    }
    if !(domain_measure > 0.0) {
        return Err(TrainError::InvalidConfig(format!(
            "domain_measure = {domain_measure}"
        )));
    }
    let h = syn_preds.len() as f64;
    let scale = domain_measure / h;
    let mut value = 0.0;
    let mut d_syn = Vec::with_capacity(syn_preds.len());
    let mut d_phy = Vec::with_capacity(syn_preds.len());
    for (s, p) in syn_preds.iter().zip(phy_preds) {
        if s.len() != p.len() {
            return Err(TrainError::ShapeMismatch(format!(
                "ghost prediction components {} vs {}",
                s.len(),
                p.len()
            )));
        }
        let mut gs = Vec::with_capacity(s.len());
        let mut gp = Vec::with_capacity(s.len());
        for (si, pi) in s.iter().zip(p) {
            let gap = si - pi;
            value += scale * gap * gap;
            gs.push(2.0 * scale * gap);
            gp.push(-2.0 * scale * gap);
        }
        d_syn.push(gs);
        d_phy.push(gp);
    }
    Ok(InteractionLoss { value, d_syn, d_phy })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hyco_core::{Dataset, Rect, Region, SpaceTimePoint};

    fn dataset(obs: Vec<Vec<f64>>) -> Dataset {
        let points = obs
            .iter()
            .enumerate()
            .map(|(i, _)| SpaceTimePoint::spatial(0.1 + 0.1 * i as f64, 0.5))
            .collect();
        Dataset {
            points,
            observations: obs,
            region: Region::spatial(Rect::new(0.0, 1.0, 0.0, 1.0)),
            noise_std: 0.0,
            seed: 0,
        }
    }

    #[test]
    fn perfect_predictions_give_zero() {
        let ds = dataset(vec![vec![1.0, 2.0], vec![-0.5, 0.25]]);
        let preds = ds.observations.clone();
        assert_eq!(data_loss(&preds, &ds).unwrap(), 0.0);
    }

    #[test]
    fn single_point_three_four_residual() {
        let ds = dataset(vec![vec![0.0, 0.0]]);
        let preds = vec![vec![3.0, 4.0]];
        assert_eq!(data_loss(&preds, &ds).unwrap(), 25.0);
    }

    #[test]
    fn two_points_mean_of_squared_norms() {
        let ds = dataset(vec![vec![0.0], vec![0.0]]);
        let preds = vec![vec![1.0], vec![3.0]];
        assert_eq!(data_loss(&preds, &ds).unwrap(), 5.0);
    }

    #[test]
    fn empty_dataset_is_an_error() {
        let ds = dataset(vec![]);
        assert!(matches!(
            data_loss(&[], &ds),
            Err(TrainError::EmptyDataset)
        ));
    }

    #[test]
    fn identical_ghost_predictions_give_zero() {
        let preds = vec![vec![1.0], vec![2.0], vec![3.0]];
        let out = interaction_loss_mc(&preds, &preds, 4.0).unwrap();
        assert_eq!(out.value, 0.0);
        assert!(out.d_syn.iter().flatten().all(|&g| g == 0.0));
    }

    #[test]
    fn constant_gap_is_exact_for_any_ghost_count() {
        // Gap delta everywhere on a measure-|Omega| domain: the estimator is
        // exactly |Omega| delta^2 regardless of H.
        let measure = 7.5;
        let delta = 0.3;
        for h in [1usize, 10, 137] {
            let syn = vec![vec![delta]; h];
            let phy = vec![vec![0.0]; h];
            let out = interaction_loss_mc(&syn, &phy, measure).unwrap();
            assert!((out.value - measure * delta * delta).abs() < 1e-12);
        }
    }

    #[test]
    fn gradients_match_the_quadratic_form() {
        let syn = vec![vec![1.0, 0.0], vec![0.5, -0.5]];
        let phy = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let measure = 2.0;
        let out = interaction_loss_mc(&syn, &phy, measure).unwrap();
        let scale = measure / 2.0;
        assert_eq!(out.d_syn[0][0], 2.0 * scale * 1.0);
        assert_eq!(out.d_phy[0][0], -2.0 * scale * 1.0);
        assert_eq!(out.d_syn[1][1], 2.0 * scale * -0.5);
        // Value: scale * (1 + 0.25 + 0.25).
        assert!((out.value - scale * 1.5).abs() < 1e-15);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let syn = vec![vec![1.0]];
        let phy = vec![vec![1.0], vec![2.0]];
        assert!(interaction_loss_mc(&syn, &phy, 1.0).is_err());
    }
}
