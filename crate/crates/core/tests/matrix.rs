mod common;

use common::{oracle_covariance, oracle_spectrum, random_dense, random_sparse};
use krydim::mmio::{load_matrix_market, write_matrix};
use krydim::rng::SeedStream;
use krydim::ObservationMatrix;
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[test]
fn covariance_operator_is_symmetric_and_psd() {
    let x = ObservationMatrix::from(random_dense(40, 70, 3));
    let op = x.covariance();
    let mut rng = SeedStream::new(11);
    for _ in 0..100 {
        let u = rng.normal_vec(40);
        let v = rng.normal_vec(40);
        let (au, av) = (op.apply(&u).unwrap(), op.apply(&v).unwrap());
        assert!((dot(&u, &av) - dot(&au, &v)).abs() <= 1e-10 * norm(&u) * norm(&v));
        assert!(dot(&u, &au) >= -1e-12);
    }
}

#[test]
fn covariance_operator_matches_explicit_product() {
    for x in [ObservationMatrix::from(random_dense(25, 60, 5)), ObservationMatrix::from(random_sparse(60, 25, 0.2, 6))]
    {
        let oracle = oracle_covariance(&x);
        let op = x.covariance();
        let mut rng = SeedStream::new(7);
        let v = rng.normal_vec(x.p());
        let expected = &oracle * nalgebra::DVector::from_column_slice(&v);
        let got = op.apply(&v).unwrap();
        for (a, b) in got.iter().zip(expected.iter()) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn sparse_and_dense_storage_agree() {
    let sparse = random_sparse(30, 45, 0.15, 9);
    let dense = ObservationMatrix::from(sparse.to_dense());
    let sparse = ObservationMatrix::from(sparse);
    assert!((sparse.frob_sq() - dense.frob_sq()).abs() <= 1e-12 * dense.frob_sq());
    assert!((sparse.gram_frob_sq() - dense.gram_frob_sq()).abs() <= 1e-10 * dense.gram_frob_sq());
    let v = SeedStream::new(1).normal_vec(45);
    let (a, b) = (sparse.apply(&v).unwrap(), dense.apply(&v).unwrap());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12 * (1.0 + y.abs())));
}

#[test]
fn matrix_market_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (name, x) in [
        ("dense.mtx", ObservationMatrix::from(random_dense(7, 5, 1))),
        ("sparse.mtx", ObservationMatrix::from(random_sparse(9, 12, 0.3, 2))),
    ] {
        let path = dir.path().join(name);
        write_matrix(&path, &x).unwrap();
        let back = load_matrix_market(&path).unwrap();
        assert_eq!(back.is_sparse(), x.is_sparse());
        assert_eq!(back.to_dense(), x.to_dense());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn trace_and_gram_identities(p in 2usize..50, n in 2usize..80, seed in any::<u64>()) {
        let x = ObservationMatrix::from(random_dense(p, n, seed));
        let ell = oracle_spectrum(&x);
        let trace: f64 = ell.iter().sum();
        let squares: f64 = ell.iter().map(|l| l * l).sum();
        let nf = n as f64;
        prop_assert!((trace - x.frob_sq() / nf).abs() <= 1e-10 * trace);
        prop_assert!((squares - x.gram_frob_sq() / (nf * nf)).abs() <= 1e-10 * squares);
    }

    #[test]
    fn sparse_gram_identity(p in 2usize..40, n in 2usize..40, seed in any::<u64>()) {
        let x = ObservationMatrix::from(random_sparse(p, n, 0.3, seed));
        let squares: f64 = oracle_spectrum(&x).iter().map(|l| l * l).sum();
        let nf = n as f64;
        prop_assert!((squares - x.gram_frob_sq() / (nf * nf)).abs() <= 1e-10 * squares.max(1e-300));
    }
}
