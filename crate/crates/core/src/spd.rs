//! The symmetric space of positive definite matrices.
//!
//! Period matrices of marked metric graphs land here. The metric is the
//! affine-invariant one, `<h1, h2>_y = tr(y^-1 h1 y^-1 h2)`, whose geodesic
//! distance is `d(a, b) = ||log(a^-1/2 b a^-1/2)||_F`. On top of the metric
//! the module provides the two integer searches the Jacobian comparisons
//! need: the exact shortest nonzero integer vector of a quadratic form
//! (Cholesky-bounded enumeration) and a bounded search for a unimodular
//! congruence between two forms.

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::snf;

/// Relative symmetry tolerance accepted on input matrices.
pub const SYM_TOL: f64 = 1e-12;

/// Entrywise tolerance for a unimodular congruence `u a u^T = b`.
pub const GLNZ_TOL: f64 = 1e-9;

/// Node budget for the integer searches; exceeding it is reported as an
/// enumeration overflow rather than silently truncated.
const SEARCH_BUDGET: u64 = 200_000_000;

/// A symmetric positive definite matrix, validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdPoint {
    mat: Mat,
}

impl SpdPoint {
    pub fn new(mat: Mat) -> Result<Self> {
        if !mat.is_square() || !mat.is_symmetric(SYM_TOL) {
            return Err(Error::NotSpd);
        }
        let mat = mat.symmetrized();
        if mat.cholesky().is_none() {
            return Err(Error::NotSpd);
        }
        Ok(SpdPoint { mat })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SpdPoint::new(Mat::from_rows(rows))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.mat.jacobi_eigen()?.0[0])
    }

    /// `self^(-1/2)` through the spectral decomposition.
    pub fn inv_sqrt(&self) -> Result<Mat> {
        self.mat.sym_map(|l| 1.0 / l.sqrt())
    }
}

/// The invariant metric tensor at `y` applied to two symmetric tangents.
pub fn tensor_eval(y: &SpdPoint, h1: &Mat, h2: &Mat) -> Result<f64> {
    let n = y.dim();
    for h in [h1, h2] {
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::DimMismatch("tangent size differs from base point".into()));
        }
        if !h.is_symmetric(SYM_TOL) {
            return Err(Error::Invalid("tangent matrix is not symmetric".into()));
        }
    }
    let yi = y.mat.inverse()?;
    Ok(yi.mul(h1).mul(&yi).mul(h2).trace())
}

/// Geodesic distance for the invariant metric:
/// `||log(a^-1/2 b a^-1/2)||_F`.
pub fn d_inv(a: &SpdPoint, b: &SpdPoint) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch("points have different sizes".into()));
    }
    let w = a.inv_sqrt()?;
    let m = w.mul(b.mat()).mul(&w).symmetrized();
    let (vals, _) = m.jacobi_eigen()?;
    if vals[0] <= 0.0 {
        return Err(Error::NotSpd);
    }
    Ok(vals.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

/// Same distance through a different factorization (Cholesky whitening
/// `L^-1 b L^-T` instead of the inverse square root); used to cross-check
/// `d_inv` in tests.
pub fn d_inv_cholesky(a: &SpdPoint, b: &SpdPoint) -> Result<f64> {
    let l = a.mat().cholesky().ok_or(Error::NotSpd)?;
    let li = l.inverse()?;
    let m = li.mul(b.mat()).mul(&li.transpose()).symmetrized();
    let (vals, _) = m.jacobi_eigen()?;
    Ok(vals.iter().map(|v| v.ln().powi(2)).sum::<f64>().sqrt())
}

/// Exact minimum of `v^T q v` over nonzero integer vectors, with a witness
/// attaining it. Cholesky-bounded exhaustive enumeration; the initial bound
/// is the smallest diagonal entry (a coordinate vector always attains it).
pub fn shortest_vector(q: &SpdPoint) -> Result<(f64, Vec<i64>)> {
    let n = q.dim();
    let l = q.mat().cholesky().ok_or(Error::NotSpd)?;
    let r = l.transpose(); // upper triangular, q = r^T r
    let bound = (0..n).map(|i| q.mat()[(i, i)]).fold(f64::INFINITY, f64::min);
    let bound = bound * (1.0 + 1e-12);

    // Depth-first from the last coordinate; v_i ranges over the integer
    // interval allowed by the remaining budget.
    let mut v = vec![0i64; n];
    let mut best_val = f64::INFINITY;
    let mut best: Option<Vec<i64>> = None;
    let mut visited: u64 = 0;

    fn descend(
        r: &Mat,
        i: usize,
        v: &mut Vec<i64>,
        used: f64,
        bound: f64,
        best_val: &mut f64,
        best: &mut Option<Vec<i64>>,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        if *visited > SEARCH_BUDGET {
            return Err(Error::EnumerationOverflow(*visited as u128));
        }
        let n = r.nrows();
        if i == usize::MAX {
            // complete vector
            if v.iter().any(|&x| x != 0) && used < *best_val {
                *best_val = used;
                *best = Some(v.clone());
            }
            return Ok(());
        }
        // residual row sum for coordinate i given the chosen tail
        let tail: f64 = ((i + 1)..n).map(|j| r[(i, j)] * v[j] as f64).sum();
        let rii = r[(i, i)];
        let budget = bound - used;
        if budget < 0.0 {
            return Ok(());
        }
        let center = -tail / rii;
        let radius = budget.sqrt() / rii;
        let lo = (center - radius).ceil() as i64;
        let hi = (center + radius).floor() as i64;
        for x in lo..=hi {
            v[i] = x;
            let term = (rii * x as f64 + tail).powi(2);
            if used + term <= bound {
                descend(r, i.wrapping_sub(1), v, used + term, bound, best_val, best, visited)?;
            }
        }
        v[i] = 0;
        Ok(())
    }

    descend(&r, n - 1, &mut v, 0.0, bound, &mut best_val, &mut best, &mut visited)?;
    let mut w = best.expect("a coordinate vector is always within the bound");
    if let Some(first) = w.iter().find(|&&x| x != 0) {
        if *first < 0 {
            for x in &mut w {
                *x = -*x;
            }
        }
    }
    Ok((best_val, w))
}

/// Searches for `u` with integer entries in `[-radius, radius]`,
/// `|det u| = 1`, and `||u a u^T - b||_max < 1e-9`. Returns the first
/// witness in the documented order: increasing maximal absolute entry,
/// then lexicographic over the row-major entry tuple. `Ok(None)` means the
/// search was exhausted without a witness (conclusive for that radius).
pub fn glnz_equivalent(
    a: &SpdPoint,
    b: &SpdPoint,
    radius: i64,
) -> Result<Option<Vec<Vec<i64>>>> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimMismatch("forms have different sizes".into()));
    }
    if radius < 1 {
        return Err(Error::Invalid("radius must be at least 1".into()));
    }
    let am = a.mat();
    let bm = b.mat();
    let mut visited: u64 = 0;

    for shell in 1..=radius {
        let mut u = vec![vec![0i64; n]; n];
        if let Some(w) =
            fill_row(0, shell, n, &mut u, am, bm, &mut visited)?
        {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Recursive row filler for the congruence search. Rows are enumerated in
/// lexicographic order over entries `-shell..=shell`; a finished row `i`
/// must satisfy the quadratic constraints against `b` (diagonal and all
/// earlier cross terms), which prunes almost everything early.
fn fill_row(
    row: usize,
    shell: i64,
    n: usize,
    u: &mut Vec<Vec<i64>>,
    a: &Mat,
    b: &Mat,
    visited: &mut u64,
) -> Result<Option<Vec<Vec<i64>>>> {
    if row == n {
        // shell discipline: max entry must hit the shell exactly, so each
        // matrix is produced once, in increasing-shell order
        let max = u.iter().flatten().map(|x| x.abs()).max().unwrap_or(0);
        if max != shell {
            return Ok(None);
        }
        let det = snf::det_int(&snf::int_mat(u));
        use num::Signed;
        if det.abs() != num::BigInt::from(1) {
            return Ok(None);
        }
        return Ok(Some(u.clone()));
    }
    let mut entries = vec![-shell; n];
    loop {
        *visited += 1;
        if *visited > SEARCH_BUDGET {
            return Err(Error::EnumerationOverflow(*visited as u128));
        }
        u[row] = entries.clone();
        if row_feasible(row, u, a, b) {
            if let Some(w) = fill_row(row + 1, shell, n, u, a, b, visited)? {
                return Ok(Some(w));
            }
        }
        // advance lexicographically; start value is all -shell
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            if entries[k] < shell {
                entries[k] += 1;
                for t in (k + 1)..n {
                    entries[t] = -shell;
                }
                break;
            }
        }
    }
}

fn row_feasible(row: usize, u: &[Vec<i64>], a: &Mat, b: &Mat) -> bool {
    let n = a.nrows();
    let quad = |r1: &[i64], r2: &[i64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            if r1[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += (r1[i] * r2[j]) as f64 * a[(i, j)];
            }
        }
        s
    };
    if (quad(&u[row], &u[row]) - b[(row, row)]).abs() >= GLNZ_TOL {
        return false;
    }
    for prev in 0..row {
        if (quad(&u[row], &u[prev]) - b[(row, prev)]).abs() >= GLNZ_TOL {
            return false;
        }
    }
    true
}

/// `u a u^T` over floats, for checking witnesses.
pub fn congruence(a: &Mat, u: &[Vec<i64>]) -> Mat {
    let um = Mat::from_rows(
        &u.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<_>>(),
    );
    um.mul(a).mul(&um.transpose())
}
