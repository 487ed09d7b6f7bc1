//! Property suites for the shared numerics: interpolation exactness on
//! affine fields, metric scale invariance, file round-trips and sampler
//! uniformity.

use hyco_core::{
    bilinear_interpolate, normalized_l2_error, read_field, sample_uniform_points, write_field,
    BoundaryKind, Grid2D, Rect, Region, ScalarField,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Bilinear interpolation reproduces globally affine fields exactly at
    /// every interior query point.
    #[test]
    fn affine_fields_interpolate_exactly(
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
        c in -5.0f64..5.0,
        qx in 0.0f64..1.0,
        qy in 0.0f64..1.0,
    ) {
        let g = Grid2D::new(9, 7, 0.0, 1.0, 0.0, 1.0, BoundaryKind::DirichletZero).unwrap();
        let f = ScalarField::from_fn(g, |x, y| a + b * x + c * y).unwrap();
        let v = bilinear_interpolate(&f, qx, qy).unwrap();
        let expect = a + b * qx + c * qy;
        prop_assert!((v - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
    }

    /// normalized_l2_error(c*pred, c*ref) == normalized_l2_error(pred, ref)
    /// for any c != 0.
    #[test]
    fn error_is_scale_invariant_in_the_pair(
        pred in prop::collection::vec(-10.0f64..10.0, 4..32),
        scale in prop_oneof![(-8.0f64..-0.25), (0.25f64..8.0)],
    ) {
        let reference: Vec<f64> = pred.iter().enumerate().map(|(i, v)| v + (i as f64 * 0.7).sin() + 0.1).collect();
        prop_assume!(reference.iter().map(|r| r * r).sum::<f64>() > 1e-12);
        let e = normalized_l2_error(&pred, &reference).unwrap();
        let pred_s: Vec<f64> = pred.iter().map(|v| v * scale).collect();
        let ref_s: Vec<f64> = reference.iter().map(|v| v * scale).collect();
        let e_s = normalized_l2_error(&pred_s, &ref_s).unwrap();
        prop_assert!((e - e_s).abs() <= 1e-12 * (1.0 + e));
    }

    /// Field file round-trip is the identity on the value array, bit for bit.
    #[test]
    fn field_round_trip_identity(
        values in prop::collection::vec(-1e6f64..1e6, 12),
        periodic in any::<bool>(),
    ) {
        let boundary = if periodic { BoundaryKind::Periodic } else { BoundaryKind::DirichletZero };
        let g = Grid2D::new(4, 3, 0.0, 2.0, -1.0, 1.0, boundary).unwrap();
        let f = ScalarField::new(g, values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roundtrip.hyco");
        write_field(&f, &path).unwrap();
        let back = read_field(&path).unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        for (a, b) in f.values().iter().zip(back.values()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

/// Chi-squared uniformity of the sampler on a 4x4 occupancy histogram at
/// n = 10^4: the statistic stays below the 0.999 quantile of chi2(15).
#[test]
fn sampler_passes_chi_squared_uniformity() {
    let region = Region::spatial(Rect::new(0.0, 1.0, 0.0, 1.0));
    let n = 10_000usize;
    for seed in [0u64, 1, 42, 1234] {
        let pts = sample_uniform_points(&region, n, seed).unwrap();
        let mut counts = [0usize; 16];
        for p in &pts {
            let cx = ((p.x * 4.0) as usize).min(3);
            let cy = ((p.y * 4.0) as usize).min(3);
            counts[cy * 4 + cx] += 1;
        }
        let expected = n as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // chi2 inverse CDF at p = 0.999 with 15 degrees of freedom.
        const CHI2_CRIT_15_DOF_P999: f64 = 37.697;
        assert!(
            chi2 < CHI2_CRIT_15_DOF_P999,
            "seed {seed}: chi2 = {chi2:.2} exceeds the p > 0.001 threshold"
        );
    }
}
