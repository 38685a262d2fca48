mod common;

use common::to_nalgebra;
use krydim::datagen::{gen_signal_data, gen_sparse_lowrank, random_orthonormal, SignalModelSpec, SparseModelSpec};
use krydim::rng::SeedStream;
use proptest::prelude::*;

fn model_strategy() -> impl Strategy<Value = (f64, Vec<f64>)> {
    (0.2f64..3.0, prop::collection::vec(0.1f64..30.0, 1..6)).prop_map(|(sigma, mut offsets)| {
        offsets.sort_by(|a, b| b.total_cmp(a));
        (sigma, offsets.into_iter().map(|x| sigma + x).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn population_spectrum_is_signal_plus_noise_floor(
        p in 6usize..50, seed in any::<u64>(), (sigma, lambdas) in model_strategy()
    ) {
        let spec = SignalModelSpec { p, n: 10, lambdas: lambdas.clone(), sigma, seed };
        let cov = spec.population_covariance().unwrap();
        let mut eig: Vec<f64> = to_nalgebra(&cov).symmetric_eigen().eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        let mut expected = lambdas.clone();
        expected.resize(p, sigma);
        for (a, b) in eig.iter().zip(&expected) {
            prop_assert!((a - b).abs() <= 1e-10 * expected[0]);
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed(seed in any::<u64>()) {
        let spec = SignalModelSpec { p: 12, n: 30, lambdas: vec![9.0, 4.0], sigma: 1.0, seed };
        prop_assert_eq!(gen_signal_data(&spec).unwrap().to_dense(), gen_signal_data(&spec).unwrap().to_dense());
        let sparse = SparseModelSpec { p: 60, q: 3, lambda_q: 5.0, density: 0.1, sigma: 1.0, seed };
        prop_assert_eq!(gen_sparse_lowrank(&sparse).unwrap().to_dense(), gen_sparse_lowrank(&sparse).unwrap().to_dense());
    }

    #[test]
    fn random_orthonormal_has_orthonormal_columns(p in 1usize..40, seed in any::<u64>()) {
        let q = 1 + (seed as usize % p);
        let b = random_orthonormal(p, q, &mut SeedStream::new(seed)).unwrap();
        prop_assert_eq!((b.rows(), b.cols()), (p, q));
        prop_assert!(b.orthonormality_defect() <= 1e-12);
    }
}

#[test]
fn different_seeds_give_different_data() {
    let a = SignalModelSpec { p: 10, n: 20, lambdas: vec![5.0], sigma: 1.0, seed: 1 };
    let b = SignalModelSpec { seed: 2, ..a.clone() };
    assert_ne!(gen_signal_data(&a).unwrap().to_dense(), gen_signal_data(&b).unwrap().to_dense());
}

#[test]
fn sample_covariance_approaches_population() {
    let spec = SignalModelSpec { p: 20, n: 20000, lambdas: vec![10.0, 4.0], sigma: 1.0, seed: 5 };
    let x = gen_signal_data(&spec).unwrap();
    let ell = common::oracle_spectrum(&x);
    assert!((ell[0] / 10.0 - 1.0).abs() < 0.05);
    assert!((ell[1] / 4.0 - 1.0).abs() < 0.05);
    assert!(ell[2..].iter().all(|l| (l - 1.0).abs() < 0.1));
}

#[test]
fn noiseless_sparse_model_has_rank_q() {
    let spec = SparseModelSpec { p: 200, q: 4, lambda_q: 5.0, density: 0.1, sigma: 0.0, seed: 3 };
    let x = gen_sparse_lowrank(&spec).unwrap();
    assert!(x.is_sparse());
    let ell = common::oracle_spectrum(&x);
    assert!(ell[3] > 1e-6 * ell[0]);
    assert!(ell[4..].iter().all(|l| l.abs() <= 1e-10 * ell[0]));
}
