//! Incremental block-Krylov basis, Rayleigh–Ritz projection and top-k
//! spectrum estimation for the implicit covariance operator.
//!
//! Each iteration draws a unit start vector `v` in `R^n`, builds the block
//! `[X v, S_n X v, ..., S_n^{m-1} X v] / n` (columns normalized), folds it into
//! the orthonormal basis with two-pass modified Gram–Schmidt and projects
//! `S_n` onto the basis.

use serde::{Deserialize, Serialize};

use crate::eig::symmetric_eig_small;
use crate::error::{Error, Result};
use crate::matrix::{axpy, dot, norm, CovarianceColumns, CovarianceOperator, DenseMatrix, ObservationMatrix};
use crate::rng::SeedStream;

/// Post-orthogonalization norm, relative to the incoming norm, below which a
/// block column is treated as linearly dependent and dropped.
pub const DROP_TOL: f64 = 1e-10;

/// How the basis is kept between iterations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrthMode {
    /// After each iteration the basis is cut back to `k` columns: the `k`
    /// dominant Ritz vectors of `span[Q, K]`.
    #[default]
    PaperTruncated,
    /// Every independent Krylov direction is kept (up to `p`).
    Accumulating,
}

impl std::str::FromStr for OrthMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-truncated" | "truncated" => Ok(Self::PaperTruncated),
            "accumulating" => Ok(Self::Accumulating),
            other => Err(Error::Parameter(format!("unknown mode {other:?}"))),
        }
    }
}

/// Ritz values (non-increasing) and the matching orthonormal Ritz vectors.
#[derive(Clone, Debug)]
pub struct SpectrumEstimate {
    pub theta: Vec<f64>,
    /// `p x k`; may have fewer than `k` columns when the Krylov space is
    /// exhausted, in which case the trailing `theta` entries are zero.
    pub vectors: DenseMatrix,
}

impl SpectrumEstimate {
    pub fn k(&self) -> usize {
        self.theta.len()
    }

    /// The first `q` Ritz vectors.
    pub fn leading_vectors(&self, q: usize) -> DenseMatrix {
        let mut y = self.vectors.clone();
        y.truncate_columns(q);
        y
    }
}

/// Krylov block for start vector `v` (length `n`) with `m` columns.
///
/// Column `j` spans `(X X^T)^{j-1} X v / n`; each column is normalized before
/// the next power is applied. If a power vanishes the block is returned short.
pub fn build_block(x: &ObservationMatrix, v: &[f64], m: usize) -> Result<DenseMatrix> {
    if m == 0 {
        return Err(Error::Parameter("Krylov depth m must be at least 1".into()));
    }
    let vnorm = norm(v);
    if (vnorm - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!("start vector has norm {vnorm}, expected 1")));
    }
    let op = x.covariance();
    let mut first = x.apply(v)?;
    first.iter_mut().for_each(|c| *c /= x.n() as f64);
    let mut current = first;
    let mut block = DenseMatrix::zeros(x.p(), 0);
    for j in 0..m {
        let nrm = norm(&current);
        if nrm == 0.0 || !nrm.is_finite() {
            if j == 0 {
                return Err(Error::DegenerateStart);
            }
            break;
        }
        current.iter_mut().for_each(|c| *c /= nrm);
        block.push_column(&current)?;
        if j + 1 < m {
            current = op.apply(&current)?;
        }
    }
    Ok(block)
}

/// Outcome of folding a block into the basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtendStats {
    pub added: usize,
    pub dropped: usize,
}

/// Orthonormal basis plus the cached product `S_n Q`.
#[derive(Clone, Debug)]
pub struct KrylovState {
    mode: OrthMode,
    basis: DenseMatrix,
    applied: DenseMatrix,
    k: usize,
    dropped: usize,
}

impl KrylovState {
    pub fn new(p: usize, mode: OrthMode) -> Self {
        Self { mode, basis: DenseMatrix::zeros(p, 0), applied: DenseMatrix::zeros(p, 0), k: 0, dropped: 0 }
    }

    pub fn mode(&self) -> OrthMode {
        self.mode
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    /// Current basis size `b`.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Number of completed iterations.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Total block columns dropped as dependent so far.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// Orthogonalizes the columns of `block` against the basis (and each other)
    /// and appends the independent ones. Never truncates.
    pub fn extend(&mut self, block: &DenseMatrix) -> Result<ExtendStats> {
        let p = self.basis.rows();
        if block.rows() != p {
            return Err(Error::Dimension(format!("block has {} rows, basis has {p}", block.rows())));
        }
        let mut stats = ExtendStats::default();
        for c in block.columns() {
            if self.basis.cols() >= p {
                stats.dropped += 1;
                continue;
            }
            let before = norm(c);
            if before == 0.0 {
                stats.dropped += 1;
                continue;
            }
            let mut w = c.to_vec();
            let mut last = before;
            let mut passes = 0;
            // twice is enough, with a third pass if the second still cancels heavily
            loop {
                for q in self.basis.columns() {
                    let h = dot(q, &w);
                    axpy(-h, q, &mut w);
                }
                passes += 1;
                let now = norm(&w);
                let heavy = now < 0.5 * last;
                last = now;
                if passes >= 3 || (passes == 2 && !heavy) {
                    break;
                }
            }
            if last < DROP_TOL * before {
                stats.dropped += 1;
                continue;
            }
            w.iter_mut().for_each(|x| *x /= last);
            self.basis.push_column(&w)?;
            stats.added += 1;
        }
        self.dropped += stats.dropped;
        Ok(stats)
    }

    /// One iteration: extends with `block`, projects `S_n` onto the basis and
    /// returns the top-`k` Ritz pairs, `k` being the new iteration count. In
    /// truncated mode the basis is then replaced by those `k` Ritz vectors.
    pub fn advance(&mut self, op: &CovarianceOperator<'_>, block: &DenseMatrix) -> Result<SpectrumEstimate> {
        self.k += 1;
        let old = self.applied.cols();
        self.extend(block)?;
        let fresh = {
            let mut new_cols = DenseMatrix::zeros(self.basis.rows(), 0);
            for j in old..self.basis.cols() {
                new_cols.push_column(self.basis.col(j))?;
            }
            op.apply_columns(&new_cols)?
        };
        for c in fresh.columns() {
            self.applied.push_column(c)?;
        }

        let ritz = project(&self.basis, &self.applied)?;
        let keep = self.k.min(ritz.theta.len());
        let vectors = self.basis.matmul(&ritz.coefficients_leading(keep))?;
        if self.mode == OrthMode::PaperTruncated {
            self.applied = self.applied.matmul(&ritz.coefficients_leading(keep))?;
            self.basis = vectors.clone();
        }
        let mut theta = ritz.theta;
        theta.truncate(keep);
        theta.resize(self.k, 0.0);
        Ok(SpectrumEstimate { theta, vectors })
    }

    /// Extends the basis with `block` and, in truncated mode, cuts it back to
    /// the `k` dominant Ritz vectors (`k` = iteration count after this call).
    pub fn extend_basis(&mut self, op: &CovarianceOperator<'_>, block: &DenseMatrix) -> Result<ExtendStats> {
        let dropped_before = self.dropped;
        let dim_before = self.dim();
        self.advance(op, block)?;
        Ok(ExtendStats { added: self.dim().saturating_sub(dim_before), dropped: self.dropped - dropped_before })
    }
}

struct Projection {
    theta: Vec<f64>,
    coefficients: DenseMatrix,
}

impl Projection {
    fn coefficients_leading(&self, k: usize) -> DenseMatrix {
        let mut c = self.coefficients.clone();
        c.truncate_columns(k);
        c
    }
}

/// Eigen-decomposes `T = Q^T (S_n Q)` after symmetrizing it.
fn project(basis: &DenseMatrix, applied: &DenseMatrix) -> Result<Projection> {
    let t = basis.t_matmul(applied)?;
    let b = t.rows();
    let mut sym = DenseMatrix::zeros(b, b);
    for i in 0..b {
        for j in 0..b {
            sym.set(i, j, 0.5 * (t.get(i, j) + t.get(j, i)));
        }
    }
    let eig = symmetric_eig_small(&sym)?;
    Ok(Projection { theta: eig.values, coefficients: eig.vectors })
}

/// Rayleigh–Ritz on an explicit orthonormal basis: `b` applications of `S_n`.
pub fn rayleigh_ritz(x: &ObservationMatrix, q: &DenseMatrix) -> Result<SpectrumEstimate> {
    if q.rows() != x.p() {
        return Err(Error::Dimension(format!("basis has {} rows, data has {}", q.rows(), x.p())));
    }
    let defect = q.orthonormality_defect();
    if defect > 1e-8 {
        return Err(Error::Parameter(format!("basis is not orthonormal (defect {defect:e})")));
    }
    let applied = x.covariance().apply_columns(q)?;
    let proj = project(q, &applied)?;
    let vectors = q.matmul(&proj.coefficients)?;
    Ok(SpectrumEstimate { theta: proj.theta, vectors })
}

/// Attempts before a zero start projection is treated as an exhausted range.
pub const START_ATTEMPTS: usize = 8;

/// Draws a start vector and builds its block, resampling on degenerate starts.
/// Returns `None` when every attempt lands in the null space of `X`.
pub fn draw_block(x: &ObservationMatrix, m: usize, rng: &mut SeedStream) -> Result<Option<DenseMatrix>> {
    for _ in 0..START_ATTEMPTS {
        let v = rng.unit_vector(x.n());
        match build_block(x, &v, m) {
            Ok(block) => return Ok(Some(block)),
            Err(Error::DegenerateStart) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Top-`k` Ritz pairs after `k` block iterations of depth `m`.
pub fn topk_spectrum(x: &ObservationMatrix, k: usize, m: usize, mode: OrthMode, seed: u64) -> Result<SpectrumEstimate> {
    if k == 0 || k > x.p() {
        return Err(Error::Dimension(format!("k = {k} must lie in 1..={}", x.p())));
    }
    let op = x.covariance();
    let mut state = KrylovState::new(x.p(), mode);
    let mut rng = SeedStream::new(seed);
    let mut last = None;
    for _ in 0..k {
        let block = draw_block(x, m, &mut rng)?.unwrap_or_else(|| DenseMatrix::zeros(x.p(), 0));
        last = Some(state.advance(&op, &block)?);
    }
    Ok(last.expect("k >= 1"))
}

/// Block width used when streaming columns of `S_n`.
pub const STREAM_BLOCK: usize = 256;

/// `||S_n - Y Y^T S_n||_F` for orthonormal `Y`, streaming `S_n` in column
/// blocks of [`STREAM_BLOCK`].
pub fn projection_error(x: &ObservationMatrix, y: &DenseMatrix) -> Result<f64> {
    if y.rows() != x.p() {
        return Err(Error::Dimension(format!("subspace has {} rows, data has {}", y.rows(), x.p())));
    }
    let columns = CovarianceColumns::new(x);
    let p = x.p();
    let mut total = 0.0;
    let mut start = 0;
    while start < p {
        let end = (start + STREAM_BLOCK).min(p);
        let a = columns.block(start, end);
        let coeff = y.t_matmul(&a)?;
        let proj = y.matmul(&coeff)?;
        total += a.as_slice().iter().zip(proj.as_slice()).map(|(u, v)| (u - v) * (u - v)).sum::<f64>();
        start = end;
    }
    Ok(total.sqrt())
}
