//! Small exact linear algebra: integer matrices for Weyl actions and ray
//! data, rational Gaussian elimination for basis expansion and rank checks.

// Elimination code reads better with explicit row/column indices.
#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    assert_eq!(a[0].len(), k, "dimension mismatch in matrix product");
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            let ail = a[i][l];
            if ail == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += ail * b[l][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &IntMat, v: &[i64]) -> Vec<i64> {
    assert_eq!(a[0].len(), v.len(), "dimension mismatch in matrix-vector product");
    a.iter()
        .map(|row| row.iter().zip(v).map(|(r, x)| r * x).sum())
        .collect()
}

pub fn transpose(a: &IntMat) -> IntMat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

/// Determinant by fraction-free Bareiss elimination over i128.  Panics on
/// overflow, which cannot occur for the small matrices handled here.
pub fn det(a: &IntMat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    assert!(a.iter().all(|r| r.len() == n), "determinant of non-square matrix");
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let pivot = (k + 1..n).find(|&i| m[i][k] != 0);
            match pivot {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k]
                    .checked_mul(m[i][j])
                    .and_then(|x| m[i][k].checked_mul(m[k][j]).map(|y| x - y))
                    .expect("overflow in Bareiss elimination");
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    let d = sign * m[n - 1][n - 1];
    i64::try_from(d).expect("determinant out of i64 range")
}

/// Inverse of an integer matrix with determinant ±1.
pub fn inverse_unimodular(a: &IntMat) -> IntMat {
    let n = a.len();
    let q = solve_square_rational(a);
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = &q[i][j];
            assert!(v.is_integer(), "matrix is not unimodular");
            out[i][j] = int_to_i64(v.numer());
        }
    }
    out
}

fn int_to_i64(x: &BigInt) -> i64 {
    i64::try_from(x.clone()).expect("entry out of i64 range")
}

/// Rational inverse of a nonsingular square integer matrix.
fn solve_square_rational(a: &IntMat) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(a[i][j]))
                    } else {
                        BigRational::from_integer(BigInt::from(i64::from(j - n == i)))
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&i| !aug[i][col].is_zero())
            .expect("singular matrix");
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for j in col..2 * n {
            aug[col][j] = &aug[col][j] / &p;
        }
        for i in 0..n {
            if i == col || aug[i][col].is_zero() {
                continue;
            }
            let f = aug[i][col].clone();
            for j in col..2 * n {
                let v = &aug[i][j] - &f * &aug[col][j];
                aug[i][j] = v;
            }
        }
    }
    aug.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Solve the square integer system `a x = b` exactly over the rationals.
/// Returns `None` when `a` is singular.
pub fn solve_square(a: &IntMat, b: &[i64]) -> Option<Vec<BigRational>> {
    let n = a.len();
    if det(a) == 0 {
        return None;
    }
    let inv = solve_square_rational(a);
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| &inv[i][j] * BigRational::from_integer(BigInt::from(b[j])))
                    .sum()
            })
            .collect(),
    )
}

/// Dense exact matrix over the rationals, rows = equations.
pub struct QMatrix {
    pub rows: Vec<Vec<BigRational>>,
    pub cols: usize,
}

impl QMatrix {
    pub fn new(cols: usize) -> Self {
        QMatrix { rows: Vec::new(), cols }
    }

    pub fn push_row(&mut self, row: Vec<BigRational>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn push_int_row(&mut self, row: Vec<BigInt>) {
        self.push_row(row.into_iter().map(BigRational::from_integer).collect());
    }

    /// Rank by Gaussian elimination (destructive on a copy).
    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        rank_of(&mut m, self.cols).0
    }

    /// Rank together with the pivot column indices, in elimination order.
    pub fn rank_with_pivots(&self) -> (usize, Vec<usize>) {
        let mut m = self.rows.clone();
        rank_of(&mut m, self.cols)
    }
}

fn rank_of(m: &mut [Vec<BigRational>], cols: usize) -> (usize, Vec<usize>) {
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let pivot = (rank..m.len()).find(|&i| !m[i][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].clone();
        for j in col..cols {
            m[rank][j] = &m[rank][j] / &inv;
        }
        for i in 0..m.len() {
            if i == rank || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..cols {
                let v = &m[i][j] - &f * &m[rank][j];
                m[i][j] = v;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    (rank, pivots)
}

/// Solve `A x = b` (rows of `a` are equations) exactly.  Returns one
/// solution with free variables set to zero, or `None` if inconsistent.
pub fn solve_linear_system(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    assert_eq!(a.len(), b.len());
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_col_of_row = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..aug.len()).find(|&i| !aug[i][col].is_zero());
        let Some(p) = pivot else { continue };
        aug.swap(rank, p);
        let inv = aug[rank][col].clone();
        for j in col..=cols {
            aug[rank][j] = &aug[rank][j] / &inv;
        }
        for i in 0..aug.len() {
            if i == rank || aug[i][col].is_zero() {
                continue;
            }
            let f = aug[i][col].clone();
            for j in col..=cols {
                let v = &aug[i][j] - &f * &aug[rank][j];
                aug[i][j] = v;
            }
        }
        pivot_col_of_row.push(col);
        rank += 1;
        if rank == aug.len() {
            break;
        }
    }
    // Inconsistent if any zero row has a nonzero right-hand side.
    for row in aug.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (row, &col) in pivot_col_of_row.iter().enumerate() {
        x[col] = aug[row][cols].clone();
    }
    Some(x)
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g ≥ 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// An integer functional `φ` with `φ(v) = 1`, for a primitive vector `v`.
pub fn dual_functional(v: &[i64]) -> Vec<i64> {
    // Build up coefficients expressing gcd(v_0..v_k) as a combination.
    let n = v.len();
    assert!(n > 0);
    let mut coeffs = vec![0i64; n];
    let mut g = v[0];
    coeffs[0] = 1;
    if g < 0 {
        g = -g;
        coeffs[0] = -1;
    }
    for k in 1..n {
        let (g2, s, t) = ext_gcd(g, v[k]);
        for c in coeffs.iter_mut().take(k) {
            *c *= s;
        }
        coeffs[k] = t;
        g = g2;
    }
    assert_eq!(g, 1, "dual_functional requires a primitive vector");
    coeffs
}

pub fn is_one(x: &BigRational) -> bool {
    x.is_integer() && x.numer().is_one()
}

pub fn rational_is_integer_vec(xs: &[BigRational]) -> bool {
    xs.iter().all(|x| x.is_integer())
}

pub fn abs_int(x: &BigInt) -> BigInt {
    x.abs()
}
