//! Small dense matrices over `f64`.
//!
//! Everything here targets matrices of a handful of rows (period matrices
//! and simplex Gram matrices), so the implementations favour determinism
//! and clarity over asymptotics: cyclic Jacobi sweeps for symmetric
//! eigendecompositions, classic Cholesky, Gauss-Jordan inverses.

use crate::error::{Error, Result};

/// Off-diagonal convergence threshold for Jacobi sweeps, relative to the
/// Frobenius norm of the input.
pub const JACOBI_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.concat() }
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Mat::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for a in &mut out.data {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Forces exact symmetry by averaging mirror entries.
    pub fn symmetrized(&self) -> Mat {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    /// Cholesky factor `L` with `L L^T = self`, or `None` when the matrix
    /// is not (numerically) symmetric positive definite.
    pub fn cholesky(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut l = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return None;
                    }
                    l[(i, i)] = s.sqrt();
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Some(l)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a[(r, col)].abs() > a[(piv, col)].abs() {
                    piv = r;
                }
            }
            if a[(piv, col)] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    let t = a[(col, j)];
                    a[(col, j)] = a[(piv, j)];
                    a[(piv, j)] = t;
                }
                det = -det;
            }
            det *= a[(col, col)];
            let inv = 1.0 / a[(col, col)];
            for r in (col + 1)..n {
                let f = a[(r, col)] * inv;
                if f == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[(r, j)] -= f * a[(col, j)];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::DimMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if a[(r, col)].abs() > a[(piv, col)].abs() {
                    piv = r;
                }
            }
            let p = a[(piv, col)];
            if p == 0.0 || !p.is_finite() {
                return Err(Error::Degenerate("singular matrix".into()));
            }
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let f = 1.0 / a[(col, col)];
            for j in 0..n {
                a[(col, j)] *= f;
                inv[(col, j)] *= f;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let g = a[(r, col)];
                if g == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(r, j)] -= g * a[(col, j)];
                    inv[(r, j)] -= g * inv[(col, j)];
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
    /// Returns eigenvalues in ascending order and the matching orthonormal
    /// eigenvectors as columns. Convergence: off-diagonal Frobenius norm
    /// below [`JACOBI_TOL`] times the input norm.
    pub fn jacobi_eigen(&self) -> Result<(Vec<f64>, Mat)> {
        if !self.is_square() {
            return Err(Error::DimMismatch("eigendecomposition of non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.symmetrized();
        let mut v = Mat::identity(n);
        let scale = a.frob_norm().max(f64::MIN_POSITIVE);
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += 2.0 * a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= JACOBI_TOL * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq.abs() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
        let vals: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
        let mut vecs = Mat::zeros(n, n);
        for (new, &old) in order.iter().enumerate() {
            for k in 0..n {
                vecs[(k, new)] = v[(k, old)];
            }
        }
        Ok((vals, vecs))
    }

    /// Applies `f` to the spectrum of a symmetric matrix: `V f(D) V^T`.
    pub fn sym_map(&self, f: impl Fn(f64) -> f64) -> Result<Mat> {
        let (vals, vecs) = self.jacobi_eigen()?;
        let fd = Mat::diag(&vals.iter().map(|&x| f(x)).collect::<Vec<_>>());
        Ok(vecs.mul(&fd).mul(&vecs.transpose()))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let m = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let (vals, vecs) = m.jacobi_eigen().unwrap();
        assert_relative_eq!(vals[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(vals[1], 3.0, max_relative = 1e-12);
        // V D V^T reconstructs the input.
        let rec = vecs.mul(&Mat::diag(&vals)).mul(&vecs.transpose());
        assert!(rec.sub(&m).max_abs() < 1e-12);
        // columns orthonormal
        let g = vecs.transpose().mul(&vecs);
        assert!(g.sub(&Mat::identity(2)).max_abs() < 1e-12);
    }

    #[test]
    fn jacobi_handles_diagonal_and_repeated_eigenvalues() {
        let m = Mat::diag(&[2.0, 2.0, 5.0]);
        let (vals, _) = m.jacobi_eigen().unwrap();
        assert_eq!(vals, vec![2.0, 2.0, 5.0]);
    }

    #[test]
    fn cholesky_accepts_spd_and_rejects_indefinite() {
        let m = Mat::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]);
        let l = m.cholesky().unwrap();
        assert!(l.mul(&l.transpose()).sub(&m).max_abs() < 1e-12);
        let bad = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(bad.cholesky().is_none());
    }

    #[test]
    fn inverse_and_det() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_relative_eq!(m.det(), -2.0, max_relative = 1e-14);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).sub(&Mat::identity(2)).max_abs() < 1e-12);
        let sing = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn sym_map_computes_matrix_log() {
        let m = Mat::diag(&[std::f64::consts::E, 1.0]);
        let lg = m.sym_map(f64::ln).unwrap();
        assert_relative_eq!(lg[(0, 0)], 1.0, epsilon = 1e-13);
        assert_relative_eq!(lg[(1, 1)], 0.0, epsilon = 1e-13);
    }
}
