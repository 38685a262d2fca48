//! Observation matrix storage, the implicit covariance operator and the
//! Frobenius quantities used by the criterion.
//!
//! The observation matrix `X` is `p x n`: one row per feature, one column
//! per sample. The sample covariance `S_n = X X^T / n` is only ever applied,
//! never stored.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Dense column-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from row slices; convenient in tests.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            if c.len() != rows {
                return Err(Error::Dimension(format!("column of length {} in a matrix with {rows} rows", c.len())));
            }
            data.extend_from_slice(c);
        }
        Ok(Self { rows, cols: columns.len(), data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[j * self.rows + i] = value;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.rows.max(1)).take(self.cols)
    }

    /// Raw column-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn push_column(&mut self, column: &[f64]) -> Result<()> {
        if self.cols == 0 && self.data.is_empty() && self.rows == 0 {
            self.rows = column.len();
        }
        if column.len() != self.rows {
            return Err(Error::Dimension(format!("column of length {} pushed onto {} rows", column.len(), self.rows)));
        }
        self.data.extend_from_slice(column);
        self.cols += 1;
        Ok(())
    }

    /// Keeps only the first `cols` columns.
    pub fn truncate_columns(&mut self, cols: usize) {
        if cols < self.cols {
            self.cols = cols;
            self.data.truncate(self.rows * cols);
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for (i, &x) in self.col(j).iter().enumerate() {
                t.data[i * self.cols + j] = x;
            }
        }
        t
    }

    /// `self * v`.
    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = vec![0.0; self.rows];
        for (col, &vj) in self.columns().zip(v) {
            if vj != 0.0 {
                axpy(vj, col, &mut out);
            }
        }
        out
    }

    /// `self^T * u`.
    pub fn matvec_t(&self, u: &[f64]) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.rows);
        self.columns().map(|c| dot(c, u)).collect()
    }

    /// `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns: Vec<Vec<f64>> = other.columns().map(|c| self.matvec(c)).collect();
        let mut out = DenseMatrix::from_columns(self.rows, &columns)?;
        out.cols = other.cols;
        Ok(out)
    }

    /// `self^T * other`.
    pub fn t_matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply ({}x{})^T by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for j in 0..other.cols {
            let b = other.col(j);
            for i in 0..self.cols {
                out.set(i, j, dot(self.col(i), b));
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `max_ij |(self^T self - I)_ij|`, the orthonormality defect of the columns.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.cols {
            for j in i..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(self.col(i), self.col(j)) - target).abs());
            }
        }
        worst
    }
}

/// Compressed-sparse-row matrix with strictly increasing column indices per row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn new(rows: usize, cols: usize, indptr: Vec<usize>, indices: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if indptr.len() != rows + 1 || indptr[0] != 0 {
            return Err(Error::Dimension("indptr must have rows + 1 entries starting at 0".into()));
        }
        if indices.len() != values.len() || *indptr.last().unwrap() != indices.len() {
            return Err(Error::Dimension("index and value arrays disagree with indptr".into()));
        }
        for r in 0..rows {
            if indptr[r] > indptr[r + 1] {
                return Err(Error::Dimension(format!("indptr decreases at row {r}")));
            }
            let row = &indices[indptr[r]..indptr[r + 1]];
            if row.iter().any(|&c| c >= cols) {
                return Err(Error::Dimension(format!("column index out of range in row {r}")));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Dimension(format!("row {r} has unsorted or duplicate column indices")));
            }
        }
        Ok(Self { rows, cols, indptr, indices, values })
    }

    /// Builds from `(row, col, value)` triplets. Duplicates are rejected and
    /// reported as `Err((row, col))`.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> std::result::Result<Self, (usize, usize)> {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut indptr = vec![0usize; rows + 1];
        let mut indices = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut prev: Option<(usize, usize)> = None;
        for &(r, c, v) in &triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of range");
            if prev == Some((r, c)) {
                return Err((r, c));
            }
            prev = Some((r, c));
            indptr[r + 1] += 1;
            indices.push(c);
            values.push(v);
        }
        for r in 0..rows {
            indptr[r + 1] += indptr[r];
        }
        Ok(Self { rows, cols, indptr, indices, values })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let range = self.indptr[r]..self.indptr[r + 1];
        (&self.indices[range.clone()], &self.values[range])
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (idx, val) = self.row(r);
            idx.iter().zip(val).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn transpose(&self) -> CsrMatrix {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.indices {
            counts[c + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let indptr = counts.clone();
        let mut next = counts;
        let mut indices = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        // rows are visited in order, so each transposed row stays sorted
        for r in 0..self.rows {
            let (idx, val) = self.row(r);
            for (&c, &v) in idx.iter().zip(val) {
                let slot = next[c];
                indices[slot] = r;
                values[slot] = v;
                next[c] += 1;
            }
        }
        CsrMatrix { rows: self.cols, cols: self.rows, indptr, indices, values }
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| {
                let (idx, val) = self.row(r);
                idx.iter().zip(val).map(|(&c, &x)| x * v[c]).sum()
            })
            .collect()
    }

    pub fn matvec_t(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (r, &ur) in u.iter().enumerate() {
            if ur == 0.0 {
                continue;
            }
            let (idx, val) = self.row(r);
            for (&c, &x) in idx.iter().zip(val) {
                out[c] += x * ur;
            }
        }
        out
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (r, c, v) in self.triplets() {
            d.set(r, c, v);
        }
        d
    }

    /// `||A A^T||_F^2` by streaming one row of the product at a time.
    fn row_gram_frob_sq(&self) -> f64 {
        let t = self.transpose();
        let partial: Vec<f64> = (0..self.rows)
            .into_par_iter()
            .map_init(
                || (vec![0.0; self.rows], Vec::<usize>::new()),
                |(acc, touched), r| {
                    let (idx, val) = self.row(r);
                    for (&k, &x) in idx.iter().zip(val) {
                        let (rows_k, vals_k) = t.row(k);
                        for (&j, &y) in rows_k.iter().zip(vals_k) {
                            if acc[j] == 0.0 {
                                touched.push(j);
                            }
                            acc[j] += x * y;
                        }
                    }
                    let mut s = 0.0;
                    for &j in touched.iter() {
                        s += acc[j] * acc[j];
                        acc[j] = 0.0;
                    }
                    touched.clear();
                    s
                },
            )
            .collect();
        partial.iter().sum()
    }
}

/// The `p x n` data matrix: one column per observation.
#[derive(Clone, Debug, PartialEq)]
pub enum ObservationMatrix {
    Dense(DenseMatrix),
    Sparse(CsrMatrix),
}

impl From<DenseMatrix> for ObservationMatrix {
    fn from(m: DenseMatrix) -> Self {
        Self::Dense(m)
    }
}

impl From<CsrMatrix> for ObservationMatrix {
    fn from(m: CsrMatrix) -> Self {
        Self::Sparse(m)
    }
}

impl ObservationMatrix {
    /// Feature dimension (rows).
    pub fn p(&self) -> usize {
        match self {
            Self::Dense(m) => m.rows(),
            Self::Sparse(m) => m.rows(),
        }
    }

    /// Sample count (columns).
    pub fn n(&self) -> usize {
        match self {
            Self::Dense(m) => m.cols(),
            Self::Sparse(m) => m.cols(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self, Self::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match self {
            Self::Dense(m) => m.as_slice().iter().filter(|x| **x != 0.0).count(),
            Self::Sparse(m) => m.nnz(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Self::Dense(m) => m.clone(),
            Self::Sparse(m) => m.to_dense(),
        }
    }

    /// `X v` for `v` of length `n`.
    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len("X v", v.len(), self.n())?;
        Ok(match self {
            Self::Dense(m) => m.matvec(v),
            Self::Sparse(m) => m.matvec(v),
        })
    }

    /// `X^T u` for `u` of length `p`.
    pub fn apply_t(&self, u: &[f64]) -> Result<Vec<f64>> {
        check_len("X^T u", u.len(), self.p())?;
        Ok(match self {
            Self::Dense(m) => m.matvec_t(u),
            Self::Sparse(m) => m.matvec_t(u),
        })
    }

    /// `sum_ij X_ij^2`.
    pub fn frob_sq(&self) -> f64 {
        match self {
            Self::Dense(m) => m.as_slice().iter().map(|x| x * x).sum(),
            Self::Sparse(m) => m.values.iter().map(|x| x * x).sum(),
        }
    }

    /// `||X^T X||_F^2`, the sum of fourth powers of the singular values of `X`.
    ///
    /// Exact: accumulates squared inner products over pairs of columns (or
    /// rows, whichever side is smaller) without storing the Gram matrix.
    pub fn gram_frob_sq(&self) -> f64 {
        match self {
            Self::Dense(m) => {
                // pairs of columns if n <= p, pairs of rows otherwise
                let side = if m.cols() <= m.rows() { m.clone() } else { m.transpose() };
                pairwise_gram_frob_sq(&side)
            }
            Self::Sparse(m) => {
                let row_cost: usize = (0..m.rows()).map(|r| m.row(r).0.len().pow(2)).sum();
                let t = m.transpose();
                let col_cost: usize = (0..t.rows()).map(|r| t.row(r).0.len().pow(2)).sum();
                // ||X X^T||_F costs sum_k nnz(col k)^2, ||X^T X||_F costs sum_i nnz(row i)^2
                if col_cost <= row_cost {
                    m.row_gram_frob_sq()
                } else {
                    t.row_gram_frob_sq()
                }
            }
        }
    }

    /// Subtracts from each row its mean over the `n` columns. The result is dense.
    pub fn center_columns(&self) -> ObservationMatrix {
        let mut d = self.to_dense();
        let n = d.cols();
        if n == 0 {
            return ObservationMatrix::Dense(d);
        }
        let mut mean = vec![0.0; d.rows()];
        for c in d.columns() {
            axpy(1.0, c, &mut mean);
        }
        mean.iter_mut().for_each(|m| *m /= n as f64);
        for j in 0..n {
            for (x, m) in d.col_mut(j).iter_mut().zip(&mean) {
                *x -= m;
            }
        }
        ObservationMatrix::Dense(d)
    }

    pub fn covariance(&self) -> CovarianceOperator<'_> {
        CovarianceOperator::new(self)
    }

    /// Explicit `S_n = X X^T / n`. Only for small `p`: baselines and oracles.
    pub fn explicit_covariance(&self) -> DenseMatrix {
        let p = self.p();
        let n = self.n() as f64;
        let rows = match self {
            Self::Dense(m) => m.transpose(),
            Self::Sparse(m) => m.to_dense().transpose(),
        };
        // `rows` is n x p column-major, so its columns are the rows of X
        let mut s = DenseMatrix::zeros(p, p);
        for i in 0..p {
            for j in i..p {
                let v = dot(rows.col(i), rows.col(j)) / n;
                s.set(i, j, v);
                s.set(j, i, v);
            }
        }
        s
    }
}

fn pairwise_gram_frob_sq(m: &DenseMatrix) -> f64 {
    let k = m.cols();
    let partial: Vec<f64> = (0..k)
        .into_par_iter()
        .map(|i| {
            let ci = m.col(i);
            let diag = dot(ci, ci);
            let mut s = diag * diag;
            for j in (i + 1)..k {
                let g = dot(ci, m.col(j));
                s += 2.0 * g * g;
            }
            s
        })
        .collect();
    partial.iter().sum()
}

/// Applies `v -> X (X^T v) / n` without forming `S_n`.
#[derive(Clone, Copy, Debug)]
pub struct CovarianceOperator<'a> {
    data: &'a ObservationMatrix,
    scale: f64,
}

impl<'a> CovarianceOperator<'a> {
    pub fn new(data: &'a ObservationMatrix) -> Self {
        Self { data, scale: 1.0 / data.n() as f64 }
    }

    pub fn data(&self) -> &'a ObservationMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.p()
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len("S_n v", v.len(), self.data.p())?;
        let w = self.data.apply_t(v)?;
        let mut out = self.data.apply(&w)?;
        out.iter_mut().for_each(|x| *x *= self.scale);
        Ok(out)
    }

    /// Applies the operator to every column of `block`.
    pub fn apply_columns(&self, block: &DenseMatrix) -> Result<DenseMatrix> {
        check_len("S_n V", block.rows(), self.data.p())?;
        let columns: Vec<Vec<f64>> =
            (0..block.cols()).into_par_iter().map(|j| self.apply(block.col(j))).collect::<Result<_>>()?;
        let mut out = DenseMatrix::from_columns(block.rows(), &columns)?;
        out.cols = block.cols();
        Ok(out)
    }
}

/// Streams explicit columns of `S_n` in blocks without holding more than one
/// `p x block` slab at a time.
pub struct CovarianceColumns<'a> {
    data: &'a ObservationMatrix,
    columns_of_x: Option<CsrMatrix>,
    rows_of_x: Option<DenseMatrix>,
}

impl<'a> CovarianceColumns<'a> {
    pub fn new(data: &'a ObservationMatrix) -> Self {
        match data {
            ObservationMatrix::Sparse(m) => Self { data, columns_of_x: Some(m.transpose()), rows_of_x: None },
            ObservationMatrix::Dense(m) => Self { data, columns_of_x: None, rows_of_x: Some(m.transpose()) },
        }
    }

    /// Columns `start..end` of `S_n` as a dense `p x (end - start)` matrix.
    pub fn block(&self, start: usize, end: usize) -> DenseMatrix {
        let p = self.data.p();
        let inv_n = 1.0 / self.data.n() as f64;
        let columns: Vec<Vec<f64>> = (start..end)
            .into_par_iter()
            .map(|j| {
                let mut out = vec![0.0; p];
                match (self.data, &self.columns_of_x, &self.rows_of_x) {
                    (ObservationMatrix::Sparse(x), Some(xt), _) => {
                        let (idx, val) = x.row(j);
                        for (&k, &a) in idx.iter().zip(val) {
                            let (rows_k, vals_k) = xt.row(k);
                            for (&i, &b) in rows_k.iter().zip(vals_k) {
                                out[i] += a * b;
                            }
                        }
                    }
                    (ObservationMatrix::Dense(x), _, Some(rows)) => {
                        out = x.matvec(rows.col(j));
                    }
                    _ => unreachable!(),
                }
                out.iter_mut().for_each(|v| *v *= inv_n);
                out
            })
            .collect();
        DenseMatrix::from_columns(p, &columns).expect("columns have length p")
    }
}

/// `cov_matvec`: one application of `S_n`.
pub fn cov_matvec(op: &CovarianceOperator<'_>, v: &[f64]) -> Result<Vec<f64>> {
    op.apply(v)
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Dimension(format!("{what}: vector has length {got}, expected {want}")));
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
