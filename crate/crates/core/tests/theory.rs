use krydim::criterion::ic_full_spectrum;
use krydim::harness::noise_top_eigenvalues;
use krydim::theory::{
    cn_lower_bound, exact_overestimation_threshold, krylov_adjusted_thresholds, overestimation_threshold,
    tracy_widom_edge, underestimation_threshold, DetectionReport,
};
use krydim::CriterionConfig;
use proptest::prelude::*;

fn setting() -> impl Strategy<Value = (usize, usize, usize, f64)> {
    (6usize..60, 20usize..4000, 0.3f64..3.0).prop_flat_map(|(p, n, sigma)| (Just(p), Just(n), 1..p - 1, Just(sigma)))
}

/// Spectrum with `ell[pivot]` pinned and everything else ordered around it.
fn spectrum_around(p: usize, pivot: usize, value: f64, above: f64, below: f64) -> Vec<f64> {
    (0..p)
        .map(|i| match i.cmp(&pivot) {
            std::cmp::Ordering::Less => value + above * (pivot - i) as f64,
            std::cmp::Ordering::Equal => value,
            std::cmp::Ordering::Greater => value * (1.0 - below) * (p - i) as f64 / (p - pivot) as f64,
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn above_underestimation_threshold_the_signal_is_kept(
        (p, n, q, sigma) in setting(), margin in 1e-6f64..2.0, above in 0.0f64..3.0, below in 0.01f64..1.0
    ) {
        let cn = (n as f64).ln();
        let t = underestimation_threshold(sigma, cn, n, p, q).unwrap();
        let ell = spectrum_around(p, q - 1, t * (1.0 + margin), above, below);
        let (_, trace) = ic_full_spectrum(&ell, &CriterionConfig::with_sigma(sigma), n, p).unwrap();
        prop_assert!(trace[q - 1] - trace[q] > -1e-9 * trace[q].abs().max(1.0));
    }

    #[test]
    fn below_overestimation_threshold_noise_is_rejected(
        (p, n, q, sigma) in setting(), fraction in 0.0f64..0.999, above in 0.0f64..3.0, below in 0.01f64..1.0
    ) {
        let cn = (n as f64).ln();
        let t = overestimation_threshold(sigma, cn, n, p, q).unwrap();
        let value = sigma + fraction * (t - sigma);
        let ell = spectrum_around(p, q, value, above, below);
        let (_, trace) = ic_full_spectrum(&ell, &CriterionConfig::with_sigma(sigma), n, p).unwrap();
        prop_assert!(trace[q + 1] - trace[q] > -1e-9 * trace[q].abs().max(1.0));
        prop_assert!(trace[q + 1] > trace[q]);
    }

    #[test]
    fn threshold_ordering((p, n, q, sigma) in setting(), epsilon in 0.01f64..0.9) {
        let cn = (n as f64).ln();
        let over = overestimation_threshold(sigma, cn, n, p, q).unwrap();
        let exact = exact_overestimation_threshold(sigma, cn, n, p, q).unwrap();
        prop_assert!(sigma <= over && over <= exact);
        let (k_under, k_over) = krylov_adjusted_thresholds(sigma, cn, n, p, q, epsilon).unwrap();
        prop_assert!(k_under >= underestimation_threshold(sigma, cn, n, p, q).unwrap());
        prop_assert!(k_over >= over);
    }
}

#[test]
fn reference_values() {
    let cn = 400f64.ln();
    assert!((overestimation_threshold(1.0, cn, 400, 200, 5).unwrap() - 2.7046).abs() < 1e-4);
    assert!((cn_lower_bound(200, 400, 5).unwrap() - 7.556).abs() < 1e-3);
    assert!((tracy_widom_edge(1.0, 200, 400) - 2.9142).abs() < 1e-4);
    let report = DetectionReport::new(1.0, cn, 400, 200, 5, 0.1, None).unwrap();
    assert!(!report.satisfied.cn_sufficient);
}

#[test]
fn noise_edge_tracks_largest_noise_eigenvalue() {
    for (p, n) in [(40, 400), (100, 200), (150, 150), (200, 100), (300, 30)] {
        let sigma = 1.5;
        let tops = noise_top_eigenvalues(p, n, sigma, 20, (p * n) as u64).unwrap();
        let mean = tops.iter().sum::<f64>() / tops.len() as f64;
        let edge = tracy_widom_edge(sigma, p, n);
        assert!((mean / edge - 1.0).abs() <= 0.1, "p={p} n={n}: mean {mean} vs edge {edge}");
    }
}
