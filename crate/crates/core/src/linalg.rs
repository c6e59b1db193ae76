//! Small dense exact linear algebra over ℚ.
//!
//! Ranks go through fraction-free (Bareiss) elimination on the integer matrix
//! obtained by clearing row denominators; solves and inverses use
//! Gauss–Jordan over ℚ. Matrices here are at most a few dozen rows (cohomology
//! and projector matrices); the large sparse coboundary work lives in
//! [`crate::cohomology::reduction`].

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{common_denominator, Rational};

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

pub fn cols(m: &Matrix) -> usize {
    m.first().map_or(0, Vec::len)
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = cols(a);
    assert_eq!(inner, b.len(), "matrix product shape mismatch");
    let n = cols(b);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for (k, x) in row.iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc += x * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).fold(Rational::zero(), |s, t| s + t))
        .collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let c = cols(m);
    (0..c).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn trace(m: &Matrix) -> Rational {
    m.iter().enumerate().map(|(i, row)| row[i].clone()).fold(Rational::zero(), |a, b| a + b)
}

/// Rank by fraction-free Gaussian elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let d = common_denominator(row.iter());
            row.iter().map(|x| (x * Rational::from_integer(d.clone())).to_integer()).collect()
        })
        .collect();
    bareiss_rank(&mut a)
}

/// Rank of an integer matrix by Bareiss elimination; destroys its input.
pub fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let rows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..rows {
            for j in (c + 1)..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let ncols = cols(&a);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    if !a[r][j].is_zero() {
                        let delta = &f * &a[r][j];
                        a[i][j] -= delta;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Some solution of `a x = b`, or `None` if inconsistent.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = cols(a);
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = red[r][n].clone();
    }
    Some(x)
}

pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    if cols(a) != n {
        return None;
    }
    let aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(a: &Matrix) -> Rational {
    let n = a.len();
    assert_eq!(cols(a), n, "determinant of a non-square matrix");
    let mut m = a.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let delta = &f * &m[c][j];
                m[i][j] -= delta;
            }
        }
    }
    det
}

/// The pivot columns of `m`, a basis of its column space.
pub fn column_space_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let (_, pivots) = rref(m);
    pivots.into_iter().map(|c| m.iter().map(|row| row[c].clone()).collect()).collect()
}

pub fn is_zero_matrix(m: &Matrix) -> bool {
    m.iter().all(|row| row.iter().all(Zero::is_zero))
}

/// Leading principal minors, all positive.
pub fn is_positive_definite(m: &Matrix) -> bool {
    (1..=m.len()).all(|k| {
        let minor: Matrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        determinant(&minor).is_positive()
    })
}
