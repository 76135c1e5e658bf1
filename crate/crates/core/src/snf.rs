//! Smith normal form over arbitrary-precision integers.
//!
//! Used for the lattice questions behind markings: whether a set of integer
//! cycles is a basis of the full cycle lattice, and whether a given integer
//! vector lies in the row span of an integer matrix. Matrices are tiny
//! (genus x edge count), so the classical elimination is plenty.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

pub type IntMat = Vec<Vec<BigInt>>;

pub fn int_mat<T: Into<i64> + Copy>(rows: &[Vec<T>]) -> IntMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x.into())).collect())
        .collect()
}

pub fn identity_int(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul_int(a: &IntMat, b: &IntMat) -> IntMat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

/// Determinant of a square integer matrix (fraction-free Bareiss).
pub fn det_int(a: &IntMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(a.iter().all(|r| r.len() == n), "determinant of non-square matrix");
    let mut m = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Smith normal form `u * a * v = d` with unimodular `u`, `v`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Smith {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for i in 0..self.d.len().min(self.d.first().map_or(0, Vec::len)) {
            if self.d[i][i].is_zero() {
                break;
            }
            out.push(self.d[i][i].clone());
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

pub fn smith(a: &IntMat) -> Smith {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut d = a.to_vec();
    let mut u = identity_int(rows);
    let mut v = identity_int(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pick_pivot(&d, t) else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);
        loop {
            if d[t][t].is_negative() {
                negate_row(&mut d, &mut u, t);
            }
            let mut dirty = false;
            // clear column t
            for r in t + 1..rows {
                if d[r][t].is_zero() {
                    continue;
                }
                let q = d[r][t].div_floor(&d[t][t]);
                row_sub(&mut d, &mut u, r, t, &q);
                if !d[r][t].is_zero() {
                    swap_rows(&mut d, &mut u, t, r);
                    dirty = true;
                }
            }
            // clear row t
            for c in t + 1..cols {
                if d[t][c].is_zero() {
                    continue;
                }
                let q = d[t][c].div_floor(&d[t][t]);
                col_sub(&mut d, &mut v, c, t, &q);
                if !d[t][c].is_zero() {
                    swap_cols(&mut d, &mut v, t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide everything that remains
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| !(&d[r][c] % &d[t][t]).is_zero());
            match offender {
                Some((r, _)) => {
                    let one = BigInt::one();
                    row_addmul(&mut d, &mut u, t, r, &one);
                }
                None => break,
            }
        }
        t += 1;
    }
    Smith { d, u, v }
}

/// Solves `y * a = target` over the integers. Returns the coefficient
/// vector `y` when one exists.
pub fn solve_left(a: &IntMat, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert_eq!(target.len(), cols, "target length mismatch");
    let s = smith(a);
    // y a = t  <=>  z d = t v, with y = z u.
    let tv = mat_mul_int(&vec![target.to_vec()], &s.v);
    let w = &tv[0];
    let mut z = vec![BigInt::zero(); rows];
    for j in 0..cols {
        let dj = if j < rows { s.d[j][j].clone() } else { BigInt::zero() };
        if dj.is_zero() {
            if !w[j].is_zero() {
                return None;
            }
        } else {
            let (q, r) = w[j].div_rem(&dj);
            if !r.is_zero() {
                return None;
            }
            z[j] = q;
        }
    }
    Some(mat_mul_int(&vec![z], &s.u).pop().unwrap())
}

fn pick_pivot(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let rows = d.len();
    let cols = d.first().map_or(0, Vec::len);
    let mut best: Option<(usize, usize)> = None;
    for r in t..rows {
        for c in t..cols {
            if d[r][c].is_zero() {
                continue;
            }
            match best {
                None => best = Some((r, c)),
                Some((br, bc)) => {
                    if d[r][c].abs() < d[br][bc].abs() {
                        best = Some((r, c));
                    }
                }
            }
        }
    }
    best
}

fn swap_rows(d: &mut IntMat, u: &mut IntMat, i: usize, j: usize) {
    if i != j {
        d.swap(i, j);
        u.swap(i, j);
    }
}

fn swap_cols(d: &mut IntMat, v: &mut IntMat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in d.iter_mut() {
        row.swap(i, j);
    }
    for row in v.iter_mut() {
        row.swap(i, j);
    }
}

fn negate_row(d: &mut IntMat, u: &mut IntMat, r: usize) {
    for x in &mut d[r] {
        *x = -std::mem::take(x);
    }
    for x in &mut u[r] {
        *x = -std::mem::take(x);
    }
}

/// row r -= q * row t
fn row_sub(d: &mut IntMat, u: &mut IntMat, r: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..d[r].len() {
        let s = q * &d[t][j];
        d[r][j] -= s;
    }
    for j in 0..u[r].len() {
        let s = q * &u[t][j];
        u[r][j] -= s;
    }
}

/// row t += q * row r
fn row_addmul(d: &mut IntMat, u: &mut IntMat, t: usize, r: usize, q: &BigInt) {
    for j in 0..d[t].len() {
        let s = q * &d[r][j];
        d[t][j] += s;
    }
    for j in 0..u[t].len() {
        let s = q * &u[r][j];
        u[t][j] += s;
    }
}

/// col c -= q * col t   (v tracks column operations: a v, so apply to v's columns)
fn col_sub(d: &mut IntMat, v: &mut IntMat, c: usize, t: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in d.iter_mut() {
        let s = q * &row[t];
        row[c] -= s;
    }
    for row in v.iter_mut() {
        let s = q * &row[t];
        row[c] -= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_factorization(a: &IntMat) {
        let s = smith(a);
        let uav = mat_mul_int(&mat_mul_int(&s.u, a), &s.v);
        assert_eq!(uav, s.d, "u a v != d");
        assert_eq!(det_int(&s.u).abs(), BigInt::one());
        assert_eq!(det_int(&s.v).abs(), BigInt::one());
        // diagonal, nonnegative, divisibility chain
        let rows = s.d.len();
        let cols = s.d[0].len();
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        let divs = s.divisors();
        for w in divs.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken");
        }
    }

    #[test]
    fn known_divisors() {
        let a = int_mat(&[vec![2i64, 4], vec![6, 8]]);
        check_factorization(&a);
        let s = smith(&a);
        assert_eq!(s.divisors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn rectangular_and_degenerate() {
        let a = int_mat(&[vec![1i64, 0, 0], vec![0, 2, 0]]);
        check_factorization(&a);
        assert_eq!(smith(&a).divisors(), vec![BigInt::one(), BigInt::from(2)]);

        let z = int_mat(&[vec![0i64, 0], vec![0, 0]]);
        check_factorization(&z);
        assert!(smith(&z).divisors().is_empty());

        let neg = int_mat(&[vec![-3i64]]);
        check_factorization(&neg);
        assert_eq!(smith(&neg).divisors(), vec![BigInt::from(3)]);
    }

    #[test]
    fn solve_left_membership() {
        let a = int_mat(&[vec![1i64, 0], vec![0, 2]]);
        let y = solve_left(&a, &[BigInt::from(3), BigInt::from(4)]).unwrap();
        assert_eq!(y, vec![BigInt::from(3), BigInt::from(2)]);
        assert!(solve_left(&a, &[BigInt::zero(), BigInt::one()]).is_none());

        // row span of [[1,1,0],[0,1,1]] contains (1,0,-1) = r0 - r1
        let b = int_mat(&[vec![1i64, 1, 0], vec![0, 1, 1]]);
        let y = solve_left(&b, &[BigInt::one(), BigInt::zero(), BigInt::from(-1)]).unwrap();
        let back = mat_mul_int(&vec![y], &b);
        assert_eq!(back[0], vec![BigInt::one(), BigInt::zero(), BigInt::from(-1)]);
    }

    #[test]
    fn bareiss_determinant() {
        let a = int_mat(&[vec![2i64, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        // det = 2*(1*1-0*3) - 0 + 1*(1*3-1*0) = 2 + 3 = 5
        assert_eq!(det_int(&a), BigInt::from(5));
        let sw = int_mat(&[vec![0i64, 1], vec![1, 0]]);
        assert_eq!(det_int(&sw), BigInt::from(-1));
    }
}
