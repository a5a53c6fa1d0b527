mod common;

use faer::Mat;
use proptest::prelude::*;
use vacuumforge_core::analysis::{decay_series, find_peaks, find_peaks_2d, fit_exponential, FitWindow};
use vacuumforge_core::bogoliubov::{build_s, build_s_minus, check_charge_balance};
use vacuumforge_core::observables::{
    alternating_probabilities, elementary_symmetric, momentum_spectrum_one, momentum_spectrum_two,
    pair_probabilities, pair_statistics,
};
use vacuumforge_core::C64;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn probabilities_agree_along_both_routes(seed in any::<u64>(), dim in 1usize..9) {
        let mut rng = common::rng(seed);
        let (s, _) = common::random_contraction(&mut rng, dim);
        let lambdas = s.eigenvalues().unwrap();
        let moments = elementary_symmetric(&lambdas, dim);
        let alternating = alternating_probabilities(&moments, dim);
        let generating = pair_probabilities(&s, dim).unwrap();
        for (a, b) in generating.iter().zip(&alternating) {
            prop_assert!((a - b).abs() <= 1e-8, "{generating:?} vs {alternating:?}");
        }
        prop_assert!((generating.iter().sum::<f64>() - 1.0).abs() <= 1e-8);
        prop_assert!(generating.iter().all(|&c| c >= -1e-12));
    }

    #[test]
    fn moments_are_principal_minor_sums(seed in any::<u64>(), dim in 1usize..7) {
        let mut rng = common::rng(seed);
        let (s, _) = common::random_contraction(&mut rng, dim);
        let moments = elementary_symmetric(&s.eigenvalues().unwrap(), dim);
        for (k, &e) in moments.iter().enumerate().skip(1) {
            let minors = common::principal_minor_sum(&s.matrix, k);
            prop_assert!((e - minors).abs() <= 1e-10, "e_{k} = {e} vs minors {minors}");
        }
    }

    #[test]
    fn correlations_are_hermitian_contractions(seed in any::<u64>(), half in 1usize..7) {
        let mut rng = common::rng(seed);
        let blocks = common::blocks(common::random_unitary(&mut rng, 2 * half));
        prop_assert!(blocks.unitarity_defect() <= 1e-7);
        let s = build_s(&blocks);
        let s_minus = build_s_minus(&blocks);
        for m in [&s, &s_minus] {
            prop_assert!(m.hermiticity_defect() <= 1e-12);
            let values = m.check().unwrap();
            prop_assert!(values[0] >= -1e-9 && values[values.len() - 1] <= 1.0 + 1e-9);
        }
        prop_assert!(check_charge_balance(&s, &s_minus).unwrap() <= 1e-7);
        let stats = pair_statistics(&s, half).unwrap();
        prop_assert!((stats.total_probability - 1.0).abs() <= 1e-8);
    }

    #[test]
    fn mode_phases_do_not_change_pair_statistics(seed in any::<u64>(), half in 1usize..6) {
        let mut rng = common::rng(seed);
        let g = common::random_unitary(&mut rng, 2 * half);
        let left: Vec<C64> = (0..2 * half).map(|k| C64::from_polar(1.0, 0.7 * k as f64 + 0.3)).collect();
        let right: Vec<C64> = (0..2 * half).map(|k| C64::from_polar(1.0, -1.1 * k as f64)).collect();
        let rephased = Mat::from_fn(2 * half, 2 * half, |i, j| left[i] * g[(i, j)] * right[j]);
        let a = pair_probabilities(&build_s(&common::blocks(g)), half).unwrap();
        let b = pair_probabilities(&build_s(&common::blocks(rephased)), half).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn two_particle_spectrum_marginal(seed in any::<u64>(), dim in 2usize..9) {
        let mut rng = common::rng(seed);
        let (s, _) = common::random_contraction(&mut rng, dim);
        let chi1 = momentum_spectrum_one(&s);
        let chi2 = momentum_spectrum_two(&s);
        let n1: f64 = chi1.iter().sum();
        let square = &s.matrix * &s.matrix;
        for p in 0..dim {
            prop_assert_eq!(chi2[(p, p)], 0.0);
            let marginal: f64 = (0..dim).map(|q| chi2[(p, q)]).sum();
            let expected = 0.5 * (n1 * chi1[p] - square[(p, p)].re);
            prop_assert!((marginal - expected).abs() <= 1e-12, "{marginal} vs {expected}");
            for q in 0..dim {
                prop_assert_eq!(chi2[(p, q)], chi2[(q, p)]);
                prop_assert!(chi2[(p, q)] >= -1e-12);
            }
        }
        // Σ χ₂ = e₂
        let total: f64 = (0..dim).flat_map(|p| (0..dim).map(move |q| (p, q))).map(|(p, q)| chi2[(p, q)]).sum();
        let e2 = elementary_symmetric(&s.eigenvalues().unwrap(), 2)[2];
        prop_assert!((total - e2).abs() <= 1e-10);
    }

    #[test]
    fn peaks_ignore_positive_scaling(
        centers in proptest::collection::vec(-8.0f64..8.0, 1..4),
        scale in 1e-6f64..1e6,
    ) {
        let coords: Vec<f64> = (0..321).map(|k| -10.0 + k as f64 * 0.0625).collect();
        let values: Vec<f64> = coords
            .iter()
            .map(|&x| centers.iter().enumerate().map(|(k, c)| (1.0 + k as f64) * (-(x - c).powi(2) / 0.5).exp()).sum())
            .collect();
        let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
        let a = find_peaks(&coords, &values, 0.05);
        let b = find_peaks(&coords, &scaled, 0.05);
        prop_assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p.location - q.location).abs() <= 1e-9);
            prop_assert!((p.height * scale - q.height).abs() <= 1e-9 * q.height);
        }
        let table = Mat::from_fn(41, 41, |i, j| values[8 * i] * values[8 * j]);
        let scaled_table = Mat::from_fn(41, 41, |i, j| table[(i, j)] * scale);
        let axis: Vec<f64> = (0..41).map(|i| coords[8 * i]).collect();
        let a = find_peaks_2d(&axis, &axis, &table, 0.05);
        let b = find_peaks_2d(&axis, &axis, &scaled_table, 0.05);
        prop_assert_eq!(a.len(), b.len());
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p.location[0] - q.location[0]).abs() <= 1e-9);
            prop_assert!((p.location[1] - q.location[1]).abs() <= 1e-9);
        }
    }

    #[test]
    fn fit_ignores_scaling_and_time_shifts(
        rate in 0.02f64..0.5,
        amplitude in 1e-3f64..10.0,
        scale in 1e-3f64..1e3,
        shift in 0.0f64..20.0,
    ) {
        let times: Vec<f64> = (0..120).map(|k| 1.0 + k as f64).collect();
        let fit_of = |times: &[f64], values: &[f64]| {
            let mut series = decay_series(times, values, 2).unwrap();
            // d = values exactly: asymptote pinned at zero
            series.asymptote = 0.0;
            series.decay = values.to_vec();
            fit_exponential(&series, FitWindow { start: times[5], end: times[30] }).unwrap()
        };
        let base: Vec<f64> = times.iter().map(|t| amplitude * (-rate * t).exp()).collect();
        let scaled: Vec<f64> = base.iter().map(|d| d * scale).collect();
        let shifted: Vec<f64> = times.iter().map(|t| t + shift).collect();
        let a = fit_of(&times, &base);
        let b = fit_of(&times, &scaled);
        let c = fit_of(&shifted, &base);
        prop_assert!((a.gamma - rate).abs() <= 1e-9 * rate.max(1.0));
        prop_assert!((a.gamma - b.gamma).abs() <= 1e-9);
        prop_assert!((b.intercept - a.intercept - scale.ln()).abs() <= 1e-8);
        prop_assert!((a.gamma - c.gamma).abs() <= 1e-9);
    }
}
