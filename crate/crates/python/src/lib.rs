//! Python bindings: observation matrices, the incremental estimator, the
//! exhaustive and MDL baselines, the closed-form conditions and the
//! synthetic generators.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use krydim_core::criterion::{self, CriterionConfig, PenaltyPolicy, Scaling};
use krydim_core::datagen::{self, SignalModelSpec, SparseModelSpec};
use krydim_core::krylov::{self, OrthMode};
use krydim_core::matrix::{CsrMatrix, DenseMatrix};
use krydim_core::{mmio, theory, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn rows_of(m: &DenseMatrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect()).collect()
}

fn dense_from_rows(rows: &[Vec<f64>]) -> PyResult<DenseMatrix> {
    DenseMatrix::from_rows(rows).map_err(to_py)
}

/// A p x n observation matrix (features x samples), dense or sparse.
#[pyclass(name = "ObservationMatrix", module = "krydim", frozen)]
struct PyObservationMatrix {
    inner: krydim_core::ObservationMatrix,
}

#[pymethods]
impl PyObservationMatrix {
    /// Dense matrix from a list of rows.
    #[staticmethod]
    fn from_dense(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self { inner: dense_from_rows(&rows)?.into() })
    }

    /// Sparse matrix from coordinate lists; duplicate entries are rejected.
    #[staticmethod]
    fn from_triplets(p: usize, n: usize, rows: Vec<usize>, cols: Vec<usize>, values: Vec<f64>) -> PyResult<Self> {
        if rows.len() != cols.len() || rows.len() != values.len() {
            return Err(PyValueError::new_err("rows, cols and values must have equal length"));
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i] >= p || cols[i] >= n) {
            return Err(PyValueError::new_err(format!("entry ({}, {}) is outside {p}x{n}", rows[i], cols[i])));
        }
        let triplets = rows.into_iter().zip(cols).zip(values).map(|((r, c), v)| (r, c, v)).collect();
        let csr = CsrMatrix::from_triplets(p, n, triplets)
            .map_err(|(r, c)| PyValueError::new_err(format!("duplicate entry ({r}, {c})")))?;
        Ok(Self { inner: csr.into() })
    }

    /// Reads a Matrix Market file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self { inner: mmio::load_matrix_market(path).map_err(to_py)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        mmio::write_matrix(path, &self.inner).map_err(to_py)
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    #[getter]
    fn is_sparse(&self) -> bool {
        self.inner.is_sparse()
    }

    fn to_dense(&self) -> Vec<Vec<f64>> {
        rows_of(&self.inner.to_dense())
    }

    /// ||S_n - sigma I||_F^2.
    fn phi(&self, sigma: f64) -> PyResult<f64> {
        criterion::phi(&self.inner, sigma).map_err(to_py)
    }

    /// All eigenvalues of S_n, non-increasing.
    fn spectrum(&self, py: Python<'_>) -> PyResult<Vec<f64>> {
        py.detach(|| criterion::sample_spectrum(&self.inner)).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let kind = if self.inner.is_sparse() { "sparse" } else { "dense" };
        format!("ObservationMatrix({}x{}, {kind}, nnz={})", self.inner.p(), self.inner.n(), self.inner.nnz())
    }
}

/// Output of `estimate_dimension`.
#[pyclass(name = "EstimationResult", module = "krydim", frozen)]
struct PyEstimationResult {
    inner: criterion::EstimationResult,
    config: CriterionConfig,
    p: usize,
    n: usize,
}

#[pymethods]
impl PyEstimationResult {
    #[getter]
    fn q_hat(&self) -> usize {
        self.inner.q_hat
    }

    #[getter]
    fn ic_trace(&self) -> Vec<f64> {
        self.inner.ic_trace.clone()
    }

    #[getter]
    fn theta(&self) -> Vec<f64> {
        self.inner.theta.clone()
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi
    }

    #[getter]
    fn stopped_early(&self) -> bool {
        self.inner.stopped_early
    }

    #[getter]
    fn no_minimum_found(&self) -> bool {
        self.inner.no_minimum_found
    }

    #[getter]
    fn wall_time(&self) -> f64 {
        self.inner.wall_time
    }

    /// p x q_hat orthonormal basis as a list of rows.
    #[getter]
    fn subspace(&self) -> Vec<Vec<f64>> {
        rows_of(&self.inner.subspace)
    }

    #[pyo3(signature = (timings = false))]
    fn to_json(&self, timings: bool) -> String {
        self.inner.to_json(&self.config, self.p, self.n, timings).to_string()
    }

    fn ic_trace_csv(&self) -> String {
        self.inner.ic_trace_csv()
    }

    fn __repr__(&self) -> String {
        format!("EstimationResult(q_hat={}, stopped_early={})", self.inner.q_hat, self.inner.stopped_early)
    }
}

fn penalty(cn: &Bound<'_, PyAny>) -> PyResult<PenaltyPolicy> {
    if let Ok(v) = cn.extract::<f64>() {
        return Ok(PenaltyPolicy::Constant(v));
    }
    let s: String = cn.extract()?;
    s.parse().map_err(to_py)
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

/// Estimates the principal-subspace dimension and basis.
#[pyfunction]
#[pyo3(signature = (x, sigma, cn = None, m = 10, epsilon = 0.1, mode = "paper-truncated", scaling = "eq2", sigma_adjust = false, max_k = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn estimate_dimension(
    py: Python<'_>,
    x: &PyObservationMatrix,
    sigma: f64,
    cn: Option<&Bound<'_, PyAny>>,
    m: usize,
    epsilon: f64,
    mode: &str,
    scaling: &str,
    sigma_adjust: bool,
    max_k: Option<usize>,
    seed: u64,
) -> PyResult<PyEstimationResult> {
    let config = CriterionConfig {
        sigma,
        penalty: cn.map(penalty).transpose()?.unwrap_or_default(),
        m,
        epsilon,
        scaling: parse::<Scaling>(scaling)?,
        sigma_adjust,
        max_k,
        mode: parse::<OrthMode>(mode)?,
        seed,
    };
    let inner = py.detach(|| criterion::estimate_dimension(&x.inner, &config)).map_err(to_py)?;
    Ok(PyEstimationResult { inner, config, p: x.inner.p(), n: x.inner.n() })
}

/// Global minimizer of IC over the full spectrum; returns (q_hat, trace).
#[pyfunction]
#[pyo3(signature = (ell, sigma, n, cn = None, scaling = "eq2"))]
fn ic_full_spectrum(
    ell: Vec<f64>,
    sigma: f64,
    n: usize,
    cn: Option<&Bound<'_, PyAny>>,
    scaling: &str,
) -> PyResult<(usize, Vec<f64>)> {
    let cfg = CriterionConfig {
        sigma,
        penalty: cn.map(penalty).transpose()?.unwrap_or_default(),
        scaling: parse::<Scaling>(scaling)?,
        ..Default::default()
    };
    criterion::ic_full_spectrum(&ell, &cfg, n, ell.len()).map_err(to_py)
}

#[pyfunction]
fn mdl_estimate(ell: Vec<f64>, n: usize) -> PyResult<usize> {
    criterion::mdl_estimate(&ell, n, ell.len()).map_err(to_py)
}

/// Top-k Ritz values and vectors (list of rows) after k block iterations.
#[pyfunction]
#[pyo3(signature = (x, k, m = 10, mode = "accumulating", seed = 0))]
fn topk_spectrum(
    py: Python<'_>,
    x: &PyObservationMatrix,
    k: usize,
    m: usize,
    mode: &str,
    seed: u64,
) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let mode = parse::<OrthMode>(mode)?;
    let est = py.detach(|| krylov::topk_spectrum(&x.inner, k, m, mode, seed)).map_err(to_py)?;
    Ok((est.theta.clone(), rows_of(&est.leading_vectors(k))))
}

/// ||S_n - Y Y^T S_n||_F for an orthonormal basis given as a list of rows.
#[pyfunction]
fn projection_error(py: Python<'_>, x: &PyObservationMatrix, y: Vec<Vec<f64>>) -> PyResult<f64> {
    let y = if y.is_empty() { DenseMatrix::zeros(x.inner.p(), 0) } else { dense_from_rows(&y)? };
    py.detach(|| krylov::projection_error(&x.inner, &y)).map_err(to_py)
}

#[pyfunction]
fn underestimation_threshold(sigma: f64, cn: f64, n: usize, p: usize, q: usize) -> PyResult<f64> {
    theory::underestimation_threshold(sigma, cn, n, p, q).map_err(to_py)
}

#[pyfunction]
fn overestimation_threshold(sigma: f64, cn: f64, n: usize, p: usize, q: usize) -> PyResult<f64> {
    theory::overestimation_threshold(sigma, cn, n, p, q).map_err(to_py)
}

#[pyfunction]
fn tracy_widom_edge(sigma: f64, p: usize, n: usize) -> f64 {
    theory::tracy_widom_edge(sigma, p, n)
}

#[pyfunction]
fn cn_lower_bound(p: usize, n: usize, q: usize) -> PyResult<f64> {
    theory::cn_lower_bound(p, n, q).map_err(to_py)
}

#[pyfunction]
fn krylov_adjusted_thresholds(sigma: f64, cn: f64, n: usize, p: usize, q: usize, epsilon: f64) -> PyResult<(f64, f64)> {
    theory::krylov_adjusted_thresholds(sigma, cn, n, p, q, epsilon).map_err(to_py)
}

#[pyfunction]
fn chi_square_ratio(ell: Vec<f64>, sigma: f64, q: usize) -> PyResult<f64> {
    theory::chi_square_ratio(&ell, sigma, q).map_err(to_py)
}

/// Detection report as a JSON string.
#[pyfunction]
#[pyo3(signature = (sigma, cn, n, p, q, epsilon = 0.1, spectrum = None))]
fn detection_report(
    sigma: f64,
    cn: f64,
    n: usize,
    p: usize,
    q: usize,
    epsilon: f64,
    spectrum: Option<Vec<f64>>,
) -> PyResult<String> {
    let report = theory::DetectionReport::new(sigma, cn, n, p, q, epsilon, spectrum.as_deref()).map_err(to_py)?;
    serde_json::to_string(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Samples from the spiked Gaussian model.
#[pyfunction]
#[pyo3(signature = (p, n, lambdas, sigma, seed = 0))]
fn gen_signal_data(
    py: Python<'_>,
    p: usize,
    n: usize,
    lambdas: Vec<f64>,
    sigma: f64,
    seed: u64,
) -> PyResult<PyObservationMatrix> {
    let spec = SignalModelSpec { p, n, lambdas, sigma, seed };
    let inner = py.detach(|| datagen::gen_signal_data(&spec)).map_err(to_py)?;
    Ok(PyObservationMatrix { inner })
}

/// Sparse low-rank test matrix B Lambda B^T + N.
#[pyfunction]
#[pyo3(signature = (p, q, lambda_q, sigma, density = 0.05, seed = 0))]
fn gen_sparse_lowrank(
    py: Python<'_>,
    p: usize,
    q: usize,
    lambda_q: f64,
    sigma: f64,
    density: f64,
    seed: u64,
) -> PyResult<PyObservationMatrix> {
    let spec = SparseModelSpec { p, q, lambda_q, density, sigma, seed };
    let inner = py.detach(|| datagen::gen_sparse_lowrank(&spec)).map_err(to_py)?;
    Ok(PyObservationMatrix { inner })
}

#[pymodule(name = "krydim")]
fn krydim(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyObservationMatrix>()?;
    m.add_class::<PyEstimationResult>()?;
    m.add_function(wrap_pyfunction!(estimate_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(ic_full_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(mdl_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(topk_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(projection_error, m)?)?;
    m.add_function(wrap_pyfunction!(underestimation_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(overestimation_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(tracy_widom_edge, m)?)?;
    m.add_function(wrap_pyfunction!(cn_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(krylov_adjusted_thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(chi_square_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(detection_report, m)?)?;
    m.add_function(wrap_pyfunction!(gen_signal_data, m)?)?;
    m.add_function(wrap_pyfunction!(gen_sparse_lowrank, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
