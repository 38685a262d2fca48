//! Dense symmetric eigensolver: Householder tridiagonalization followed by
//! the implicit-shift QL iteration.

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Eigenpairs of a symmetric matrix, eigenvalues in non-increasing order.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: DenseMatrix,
}

/// Relative asymmetry tolerated before the input is rejected.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Eigen-decomposes a small dense symmetric matrix.
///
/// The input is symmetrized as `(T + T^T) / 2` first. The QL sweep is capped
/// at `30 * b` iterations in total.
pub fn symmetric_eig_small(t: &DenseMatrix) -> Result<SymmetricEigen> {
    let n = t.rows();
    if t.cols() != n {
        return Err(Error::Dimension(format!("eigensolver needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    if n == 0 {
        return Ok(SymmetricEigen { values: Vec::new(), vectors: DenseMatrix::zeros(0, 0) });
    }
    let scale = t.max_abs();
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((t.get(i, j) - t.get(j, i)).abs());
        }
    }
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::Symmetry { asymmetry: asym });
    }
    if !scale.is_finite() {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }

    // row-indexed working copy, v[i][j]
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| 0.5 * (t.get(i, j) + t.get(j, i))).collect()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    ql_implicit(&mut v, &mut d, &mut e, 30 * n)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (out_col, &k) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, out_col, v[i][k]);
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Householder reduction to tridiagonal form, accumulating the transform in `v`.
/// On exit `d` holds the diagonal and `e[1..]` the sub-diagonal.
fn tridiagonalize(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    d.copy_from_slice(&v[n - 1]);

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                let f = d[j];
                v[j][i] = f;
                let mut g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for row in v.iter_mut().take(i + 1) {
            row[i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;
}

/// Implicit-shift QL on the tridiagonal `(d, e)`, rotating the columns of `v`.
fn ql_implicit(v: &mut [Vec<f64>], d: &mut [f64], e: &mut [f64], max_iter: usize) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    let mut iterations = 0usize;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > max_iter {
                    return Err(Error::Convergence { iterations: max_iter });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let h = row[i + 1];
                        row[i + 1] = s * row[i] + c * h;
                        row[i] = c * row[i] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;

    fn residual(t: &DenseMatrix, eig: &SymmetricEigen) -> f64 {
        let tv = t.matmul(&eig.vectors).unwrap();
        let mut worst = 0.0f64;
        for j in 0..t.cols() {
            for i in 0..t.rows() {
                worst = worst.max((tv.get(i, j) - eig.vectors.get(i, j) * eig.values[j]).abs());
            }
        }
        worst
    }

    fn random_symmetric(n: usize, seed: u64) -> DenseMatrix {
        let mut s = SeedStream::new(seed);
        let mut t = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = s.normal();
                t.set(i, j, x);
                t.set(j, i, x);
            }
        }
        t
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    fn det(t: &DenseMatrix) -> f64 {
        let n = t.rows();
        let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| t.get(i, j)).collect()).collect();
        let mut det = 1.0;
        for c in 0..n {
            let piv = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
            if piv != c {
                a.swap(piv, c);
                det = -det;
            }
            det *= a[c][c];
            for r in (c + 1)..n {
                let factor = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= factor * a[c][k];
                }
            }
        }
        det
    }

    #[test]
    fn diagonal_input() {
        let t = DenseMatrix::from_rows(&[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 2.0]]).unwrap();
        let eig = symmetric_eig_small(&t).unwrap();
        assert_eq!(eig.values, vec![3.0, 2.0, 1.0]);
        // permuted identity columns, up to sign
        for (col, row) in [(0, 0), (1, 2), (2, 1)] {
            assert!((eig.vectors.get(row, col).abs() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn two_by_two() {
        let t = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let eig = symmetric_eig_small(&t).unwrap();
        assert!((eig.values[0] - 3.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_twelve_trace_det_residual() {
        let t = random_symmetric(12, 77);
        let eig = symmetric_eig_small(&t).unwrap();
        let trace: f64 = (0..12).map(|i| t.get(i, i)).sum();
        let sum: f64 = eig.values.iter().sum();
        assert!((trace - sum).abs() <= 1e-8 * trace.abs().max(1.0));
        let d = det(&t);
        let prod: f64 = eig.values.iter().product();
        assert!((d - prod).abs() <= 1e-8 * d.abs());
        assert!(residual(&t, &eig) <= 1e-9 * t.max_abs());
        assert!(eig.vectors.orthonormality_defect() <= 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_asymmetric() {
        let t = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(symmetric_eig_small(&t), Err(Error::Symmetry { .. })));
    }

    #[test]
    fn degenerate_spectra() {
        let z = DenseMatrix::zeros(5, 5);
        let eig = symmetric_eig_small(&z).unwrap();
        assert!(eig.values.iter().all(|&x| x == 0.0));
        let one = DenseMatrix::from_rows(&[vec![4.5]]).unwrap();
        assert_eq!(symmetric_eig_small(&one).unwrap().values, vec![4.5]);
        let id = DenseMatrix::identity(7);
        let eig = symmetric_eig_small(&id).unwrap();
        assert!(eig.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn larger_random() {
        for (n, seed) in [(40, 1), (97, 2)] {
            let t = random_symmetric(n, seed);
            let eig = symmetric_eig_small(&t).unwrap();
            assert!(residual(&t, &eig) <= 1e-9 * t.max_abs());
            assert!(eig.vectors.orthonormality_defect() <= 1e-10);
        }
    }
}
