//! Seeded synthetic data.
//!
//! [`gen_signal_data`] draws samples from the spiked Gaussian model
//! `x = B s + sqrt(sigma) e` whose population covariance is `B B^T + sigma I`.
//! [`gen_sparse_lowrank`] builds a square sparse test matrix
//! `X = B Lambda B^T + N` with sparse unit-norm columns in `B` and sparse
//! Gaussian noise `N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, norm, CsrMatrix, DenseMatrix, ObservationMatrix};
use crate::rng::SeedStream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalModelSpec {
    pub p: usize,
    pub n: usize,
    /// Population signal eigenvalues `lambda_1 >= ... >= lambda_q`, each
    /// including the noise floor.
    #[serde(default, deserialize_with = "crate::config::one_or_many")]
    pub lambdas: Vec<f64>,
    /// Noise variance.
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SignalModelSpec {
    pub fn q(&self) -> usize {
        self.lambdas.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.n == 0 {
            return Err(Error::Spec(format!("p and n must be positive, got {}x{}", self.p, self.n)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Spec(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        if self.q() > self.p {
            return Err(Error::Spec(format!("q = {} exceeds p = {}", self.q(), self.p)));
        }
        if let Some(i) = self.lambdas.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::Spec(format!("lambdas must be non-increasing (position {})", i + 2)));
        }
        if let Some(&last) = self.lambdas.last() {
            if !(last > self.sigma) {
                return Err(Error::Spec(format!(
                    "smallest signal eigenvalue {last} must exceed sigma = {}",
                    self.sigma
                )));
            }
        }
        Ok(())
    }

    /// Signal directions scaled by `sqrt(lambda_i - sigma)`.
    pub fn signal_factor(&self, rng: &mut SeedStream) -> Result<DenseMatrix> {
        let mut b = random_orthonormal(self.p, self.q(), rng)?;
        for (i, lambda) in self.lambdas.iter().enumerate() {
            let s = (lambda - self.sigma).sqrt();
            b.col_mut(i).iter_mut().for_each(|v| *v *= s);
        }
        Ok(b)
    }

    /// Explicit population covariance `B B^T + sigma I` for the factor drawn
    /// from this spec's seed.
    pub fn population_covariance(&self) -> Result<DenseMatrix> {
        self.validate()?;
        let mut rng = SeedStream::new(self.seed);
        let b = self.signal_factor(&mut rng)?;
        let mut sigma = b.transpose();
        sigma = b.matmul(&sigma)?;
        for i in 0..self.p {
            sigma.set(i, i, sigma.get(i, i) + self.sigma);
        }
        Ok(sigma)
    }
}

/// `p x q` matrix with orthonormal columns from Gaussian columns and two
/// Gram-Schmidt passes.
pub fn random_orthonormal(p: usize, q: usize, rng: &mut SeedStream) -> Result<DenseMatrix> {
    if q > p {
        return Err(Error::Spec(format!("cannot fit {q} orthonormal columns in dimension {p}")));
    }
    let mut out = DenseMatrix::zeros(p, 0);
    while out.cols() < q {
        let mut v = rng.normal_vec(p);
        let start = norm(&v);
        for _ in 0..2 {
            for j in 0..out.cols() {
                let c = dot(out.col(j), &v);
                axpy(-c, out.col(j), &mut v);
            }
        }
        let len = norm(&v);
        if len > 1e-8 * start {
            v.iter_mut().for_each(|x| *x /= len);
            out.push_column(&v)?;
        }
    }
    Ok(out)
}

/// Draws `n` samples from the spiked model; column `j` of the result is
/// sample `j`. Deterministic per seed.
pub fn gen_signal_data(spec: &SignalModelSpec) -> Result<ObservationMatrix> {
    spec.validate()?;
    let (p, n, q) = (spec.p, spec.n, spec.q());
    let mut rng = SeedStream::new(spec.seed);
    let b = spec.signal_factor(&mut rng)?;
    let noise = spec.sigma.sqrt();
    let mut data = Vec::with_capacity(p * n);
    let mut s = vec![0.0; q];
    for _ in 0..n {
        s.iter_mut().for_each(|v| *v = rng.normal());
        let start = data.len();
        data.extend((0..p).map(|_| noise * rng.normal()));
        let column = &mut data[start..];
        for (i, si) in s.iter().enumerate() {
            axpy(*si, b.col(i), column);
        }
    }
    Ok(DenseMatrix::new(p, n, data)?.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseModelSpec {
    pub p: usize,
    pub q: usize,
    /// Smallest entry of `Lambda`.
    pub lambda_q: f64,
    /// Fraction of nonzeros in `B` and `N`.
    pub density: f64,
    /// Noise level; `0` omits `N`.
    pub sigma: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SparseModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::Spec("p must be positive".into()));
        }
        if self.q > self.p {
            return Err(Error::Spec(format!("q = {} exceeds p = {}", self.q, self.p)));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Spec(format!("density must lie in (0, 1], got {}", self.density)));
        }
        if !(self.lambda_q > 0.0 && self.lambda_q.is_finite()) {
            return Err(Error::Spec(format!("lambda_q must be positive, got {}", self.lambda_q)));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Spec(format!("sigma must be non-negative, got {}", self.sigma)));
        }
        if self.density * ((self.p * self.q) as f64) < self.q as f64 {
            return Err(Error::Spec(format!("density {} leaves fewer than one nonzero per column of B", self.density)));
        }
        Ok(())
    }

    /// Diagonal of `Lambda`: linearly spaced from `2 lambda_q` down to `lambda_q`.
    pub fn lambdas(&self) -> Vec<f64> {
        match self.q {
            0 => Vec::new(),
            1 => vec![self.lambda_q],
            q => (0..q).map(|i| self.lambda_q * (2.0 - i as f64 / (q - 1) as f64)).collect(),
        }
    }

    fn per_line(&self) -> usize {
        ((self.density * self.p as f64).round() as usize).clamp(1, self.p)
    }
}

/// Builds the `p x p` sparse matrix `X = B Lambda B^T + N`.
///
/// Each column of `B` has `round(density p)` Gaussian nonzeros at random rows
/// and unit norm. `Lambda` is scaled by `p` so that the covariance
/// `X X^T / p` of the noiseless part has eigenvalues close to
/// [`SparseModelSpec::lambdas`]. Each row of `N` has `round(density p)`
/// nonzeros with variance `sigma / density`, which puts the noise floor of
/// `X X^T / p` at `sigma`.
pub fn gen_sparse_lowrank(spec: &SparseModelSpec) -> Result<ObservationMatrix> {
    spec.validate()?;
    let p = spec.p;
    let per_line = spec.per_line();
    let mut rng = SeedStream::new(spec.seed);

    let mut columns: Vec<(Vec<usize>, Vec<f64>)> = Vec::with_capacity(spec.q);
    for _ in 0..spec.q {
        let rows = rng.sample_distinct(p, per_line);
        let mut vals = rng.normal_vec(rows.len());
        let len = norm(&vals);
        if len == 0.0 {
            vals[0] = 1.0;
        } else {
            vals.iter_mut().for_each(|v| *v /= len);
        }
        columns.push((rows, vals));
    }

    let mut triplets = Vec::new();
    for ((rows, vals), lambda) in columns.iter().zip(spec.lambdas()) {
        let w = (p as f64 * lambda).sqrt();
        for (a, va) in rows.iter().zip(vals) {
            for (b, vb) in rows.iter().zip(vals) {
                triplets.push((*a, *b, w * va * vb));
            }
        }
    }
    if spec.sigma > 0.0 {
        let s = (spec.sigma / spec.density).sqrt();
        for r in 0..p {
            for c in rng.sample_distinct(p, per_line) {
                triplets.push((r, c, s * rng.normal()));
            }
        }
    }

    triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
    for (r, c, v) in triplets {
        match merged.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => merged.push((r, c, v)),
        }
    }
    let csr = CsrMatrix::from_triplets(p, p, merged).expect("triplets were merged");
    Ok(csr.into())
}
