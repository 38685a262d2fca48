use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("unsupported Matrix Market format: {0}")]
    UnsupportedFormat(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric: max |T - T^T| = {asymmetry:e}")]
    Symmetry { asymmetry: f64 },
    #[error("eigensolver did not converge within {iterations} iterations")]
    Convergence { iterations: usize },
    #[error("starting vector lies in the null space of the data")]
    DegenerateStart,
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("top-k residual {partial:e} exceeds the total {total:e}")]
    InconsistentInput { partial: f64, total: f64 },
    #[error("eigenvalues are not sorted in non-increasing order at index {0}")]
    Order(usize),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid model specification: {0}")]
    Spec(String),
    #[error("aborted: {0}")]
    Aborted(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
