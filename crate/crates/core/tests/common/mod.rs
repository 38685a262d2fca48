#![allow(dead_code)]

use krydim::rng::SeedStream;
use krydim::{CsrMatrix, DenseMatrix, ObservationMatrix};
use nalgebra::DMatrix;

pub fn random_dense(p: usize, n: usize, seed: u64) -> DenseMatrix {
    let mut rng = SeedStream::new(seed);
    DenseMatrix::new(p, n, rng.normal_vec(p * n)).unwrap()
}

pub fn random_sparse(p: usize, n: usize, density: f64, seed: u64) -> CsrMatrix {
    let mut rng = SeedStream::new(seed);
    let mut triplets = Vec::new();
    for i in 0..p {
        for j in 0..n {
            if rng.uniform() < density {
                triplets.push((i, j, rng.normal()));
            }
        }
    }
    CsrMatrix::from_triplets(p, n, triplets).unwrap()
}

pub fn to_nalgebra(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_column_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn oracle_covariance(x: &ObservationMatrix) -> DMatrix<f64> {
    let a = to_nalgebra(&x.to_dense());
    &a * a.transpose() / x.n() as f64
}

/// All `p` eigenvalues of `X X^T / n`, non-increasing.
pub fn oracle_spectrum(x: &ObservationMatrix) -> Vec<f64> {
    let mut ell: Vec<f64> = oracle_covariance(x).symmetric_eigen().eigenvalues.iter().copied().collect();
    ell.sort_by(|a, b| b.total_cmp(a));
    ell
}

/// `||A - A_k||_F` for the symmetric PSD `A = S_n`.
pub fn best_rank_k_error(ell: &[f64], k: usize) -> f64 {
    ell[k..].iter().map(|l| l * l).sum::<f64>().sqrt()
}

/// Data whose sample covariance has a clear gap after `q` eigenvalues.
pub fn planted(p: usize, n: usize, q: usize, seed: u64) -> ObservationMatrix {
    let lambdas: Vec<f64> = (0..q).map(|j| 30.0 - 3.0 * j as f64).collect();
    krydim::datagen::gen_signal_data(&krydim::datagen::SignalModelSpec { p, n, lambdas, sigma: 1.0, seed }).unwrap()
}
