//! Seedable random streams.
//!
//! All randomness comes from ChaCha20 (a counter-based generator with a fixed,
//! portable output sequence) seeded through `SeedableRng::seed_from_u64`.
//! Uniforms take the top 53 bits of a `u64` and map them to `(0, 1]`; normal
//! variates use the Box–Muller transform, consuming two uniforms `(u1, u2)`
//! and returning `sqrt(-2 ln u1) cos(2 pi u2)` followed by
//! `sqrt(-2 ln u1) sin(2 pi u2)` on the next call.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Derives an independent stream seed for a trial (`seed XOR index`).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

/// Derives a seed for a grid point of a sweep; the high word carries the grid
/// index so trial indices (low word) never collide with it.
pub fn grid_seed(seed: u64, grid_index: usize) -> u64 {
    seed ^ ((grid_index as u64) << 32)
}

#[derive(Clone, Debug)]
pub struct SeedStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha20Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        // rejection sampling keeps the draw unbiased
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return (x % bound) as usize;
            }
        }
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(r * angle.sin());
        r * angle.cos()
    }

    pub fn normal_vec(&mut self, len: usize) -> Vec<f64> {
        (0..len).map(|_| self.normal()).collect()
    }

    /// A standard-normal vector scaled to unit Euclidean norm.
    pub fn unit_vector(&mut self, len: usize) -> Vec<f64> {
        loop {
            let mut v = self.normal_vec(len);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                v.iter_mut().for_each(|x| *x /= norm);
                return v;
            }
        }
    }

    /// `count` distinct indices from `0..len`, in increasing order.
    pub fn sample_distinct(&mut self, len: usize, count: usize) -> Vec<usize> {
        assert!(count <= len);
        // partial Fisher-Yates
        let mut pool: Vec<usize> = (0..len).collect();
        for i in 0..count {
            let j = i + self.below(len - i);
            pool.swap(i, j);
        }
        let mut out = pool[..count].to_vec();
        out.sort_unstable();
        out
    }
}
