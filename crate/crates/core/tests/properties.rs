//! Randomized structural properties: identities that should hold across the
//! parameter space, not just at the pinned points the unit tests freeze.

use num_complex::Complex64;
use proptest::prelude::*;
use zetalab_core::bounds::{fit_exponent, g_func};
use zetalab_core::dirichlet::{zsum_batch, zsum_direct, Grid, SumRequest};
use zetalab_core::kahan::{pairwise_sum, KahanSum};
use zetalab_core::smoothing::build_cutoff;
use zetalab_core::zeta::{eval_zeta, ZetaPoint};

proptest! {
    #[test]
    fn batch_kernel_agrees_with_direct_everywhere(
        y in 2.0f64..3000.0,
        t0 in -2000.0f64..2000.0,
        dt in 1e-3f64..0.8,
        count in 2usize..40,
    ) {
        let grid = Grid::new(t0, dt, count).unwrap();
        let batch = zsum_batch(y, &grid).unwrap();
        for (k, &b) in batch.iter().enumerate() {
            let d = zsum_direct(SumRequest::new(y, grid.ordinate(k)).unwrap());
            prop_assert!(
                (b - d).norm() <= 1e-9 * d.norm().max(1.0),
                "deviation {} at ordinate {}", (b - d).norm(), grid.ordinate(k)
            );
        }
    }

    #[test]
    fn gauge_is_positive_and_plateaus_below_the_knee(
        x in 1e-6f64..1e6,
        log_t in 0.1f64..50.0,
    ) {
        let g = g_func(x, log_t);
        prop_assert!(g.is_finite() && g > 0.0, "g({x}, {log_t}) = {g}");
        if x < 1.0 / log_t {
            prop_assert_eq!(g, log_t);
        }
    }

    #[test]
    fn cutoff_stays_in_range_with_exact_plateau(
        u in 2.1f64..200.0,
        x in -0.5f64..1.5,
    ) {
        let c = build_cutoff(u, 1.0).unwrap();
        let v = c.eval(x);
        prop_assert!((0.0..=1.0).contains(&v));
        if !(0.0..1.0).contains(&x) {
            prop_assert_eq!(v, 0.0);
        }
        if x >= 1.000001 / u && x <= 1.0 - 1.000001 / u {
            prop_assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn pairwise_sum_tracks_compensated_reference(
        xs in prop::collection::vec(-1e6f64..1e6, 0..600),
    ) {
        let fast = pairwise_sum(&xs);
        let mut reference = KahanSum::new();
        let mut scale = 0.0f64;
        for &x in &xs {
            reference.add(x);
            scale += x.abs();
        }
        prop_assert!((fast - reference.value()).abs() <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn exponent_fit_recovers_affine_data(
        slope in -5.0f64..5.0,
        intercept in -5.0f64..5.0,
        jitters in prop::collection::vec(0.0f64..0.4, 3..12),
    ) {
        let points: Vec<(f64, f64)> = jitters
            .iter()
            .enumerate()
            .map(|(k, j)| {
                let x = k as f64 + j;
                (x, slope * x + intercept)
            })
            .collect();
        let fit = fit_exponent(&points).unwrap();
        prop_assert!((fit.slope - slope).abs() <= 1e-9);
        prop_assert!((fit.intercept - intercept).abs() <= 1e-8);
        prop_assert!(fit.residual <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Zeta evaluation and the batch sums both commute with conjugation of
    // the ordinate; these run the full evaluators, so fewer cases.
    #[test]
    fn zeta_respects_conjugation(sigma in 0.5f64..3.0, t in 1.0f64..500.0) {
        let plus = eval_zeta(ZetaPoint::new(sigma, t).unwrap(), 1e-10).unwrap().value;
        let minus = eval_zeta(ZetaPoint::new(sigma, -t).unwrap(), 1e-10).unwrap().value;
        prop_assert!((plus.conj() - minus).norm() <= 1e-12 * plus.norm().max(1e-30));
    }

    #[test]
    fn zsum_respects_conjugation(y in 2.0f64..5000.0, t in 0.1f64..5000.0) {
        let plus = zsum_direct(SumRequest::new(y, t).unwrap());
        let minus = zsum_direct(SumRequest::new(y, -t).unwrap());
        let gap: Complex64 = plus.conj() - minus;
        prop_assert!(gap.norm() <= 1e-12 * plus.norm().max(1.0));
    }
}
