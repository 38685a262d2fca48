//! Estimation of the dimension of a principal subspace together with an
//! orthonormal basis for it, using a block Krylov method on the implicit
//! sample covariance `S_n = X X^T / n`.
//!
//! The pipeline is: load or generate an observation matrix ([`matrix`],
//! [`mmio`], [`datagen`]), run the incremental estimator
//! ([`criterion::estimate_dimension`]), and compare against the closed-form
//! detection conditions in [`theory`]. [`harness`] reproduces the Monte-Carlo
//! experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod criterion;
pub mod datagen;
pub mod eig;
pub mod error;
pub mod harness;
pub mod krylov;
pub mod matrix;
pub mod mmio;
pub mod rng;
pub mod svg;
pub mod theory;

pub use criterion::{estimate_dimension, CriterionConfig, EstimationResult, PenaltyPolicy, Scaling};
pub use error::{Error, Result};
pub use krylov::OrthMode;
pub use matrix::{CsrMatrix, DenseMatrix, ObservationMatrix};
