use std::fmt;
use std::ops::Deref;

use rand::Rng;

use crate::cyclotomic::Cyclotomic;
use crate::rational::frac;

use super::AtlasError;

pub type CycloVector = Vec<Cyclotomic>;

/// Dense matrix with entries in a cyclotomic field, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Result<Self, AtlasError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
            return Err(AtlasError::RaggedMatrix);
        }
        Ok(Self { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Cyclotomic::one())
    }

    pub fn scalar(n: usize, c: Cyclotomic) -> Self {
        let mut data = vec![Cyclotomic::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = c.clone();
        }
        Self { rows: n, cols: n, data }
    }

    pub fn diagonal(entries: Vec<Cyclotomic>) -> Self {
        let n = entries.len();
        let mut m = Self::scalar(n, Cyclotomic::zero());
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> CycloVector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Cyclotomic::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                data.push(acc);
            }
        }
        Self { rows: self.rows, cols: other.cols, data }
    }

    pub fn apply(&self, v: &[Cyclotomic]) -> CycloVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                v.iter().enumerate().fold(Cyclotomic::zero(), |acc, (k, x)| {
                    let a = self.get(i, k);
                    if a.is_zero() || x.is_zero() { acc } else { &acc + &(a * x) }
                })
            })
            .collect()
    }

    pub fn conj_transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).conj());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }
}

impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

pub fn format_vector(v: &[Cyclotomic]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

pub fn add_vectors(a: &[Cyclotomic], b: &[Cyclotomic]) -> CycloVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Cyclotomic], b: &[Cyclotomic]) -> CycloVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Hermitian squared norm `Σ v_k conj(v_k)`, a real cyclotomic number.
pub fn norm_squared(v: &[Cyclotomic]) -> Cyclotomic {
    v.iter().fold(Cyclotomic::zero(), |acc, x| &acc + &(x * &x.conj()))
}

/// `M · M* = I`, decided exactly.
pub fn verify_unitary(m: &CycloMatrix) -> bool {
    m.is_square() && m.mul(&m.conj_transpose()).is_identity()
}

/// A square cyclotomic matrix known to be exactly unitary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryMatrix(CycloMatrix);

impl UnitaryMatrix {
    pub fn new(m: CycloMatrix) -> Result<Self, AtlasError> {
        if verify_unitary(&m) {
            Ok(Self(m))
        } else {
            Err(AtlasError::NonUnitary(m.to_string()))
        }
    }

    pub fn identity(n: usize) -> Self {
        Self(CycloMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.conj_transpose())
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.mul(&other.0))
    }

    pub fn matrix(&self) -> &CycloMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CycloMatrix {
        self.0
    }

    /// A random monomial unitary (permutation times diagonal of `order`-th
    /// roots of unity), mixed with a Hadamard block when √2 ∈ ℚ(ζ_order).
    pub fn random(n: usize, order: u32, rng: &mut impl Rng) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            perm.swap(i, j);
        }
        let mut rows = vec![vec![Cyclotomic::zero(); n]; n];
        for (i, &p) in perm.iter().enumerate() {
            rows[i][p] = Cyclotomic::root_of_unity(order, rng.random_range(0..order));
        }
        let mut m = CycloMatrix::from_rows(rows).expect("square by construction");
        if n >= 2 && order.is_multiple_of(8) && rng.random_bool(0.5) {
            // 1/√2 = (ζ_8 + ζ_8^7) / 2
            let z8 = Cyclotomic::root_of_unity(order, order / 8);
            let inv_sqrt2 = (&z8 + &z8.conj()).scale(&frac(1, 2));
            let a = rng.random_range(0..n - 1);
            let mut h = CycloMatrix::identity(n);
            let idx = |i: usize, j: usize| i * n + j;
            h.data[idx(a, a)] = inv_sqrt2.clone();
            h.data[idx(a, a + 1)] = inv_sqrt2.clone();
            h.data[idx(a + 1, a)] = inv_sqrt2.clone();
            h.data[idx(a + 1, a + 1)] = -&inv_sqrt2;
            m = m.mul(&h);
        }
        Self(m)
    }
}

impl Deref for UnitaryMatrix {
    type Target = CycloMatrix;
    fn deref(&self) -> &CycloMatrix {
        &self.0
    }
}

impl fmt::Display for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn unitary_examples() {
        assert!(verify_unitary(&CycloMatrix::identity(2)));
        assert!(verify_unitary(&CycloMatrix::diagonal(vec![Cyclotomic::root_of_unity(8, 1)])));
        let shear = CycloMatrix::from_rows(vec![vec![c(1), c(1)], vec![c(0), c(1)]]).unwrap();
        assert!(!verify_unitary(&shear));
        let rect = CycloMatrix::from_rows(vec![vec![c(1), c(0)]]).unwrap();
        assert!(!verify_unitary(&rect));
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for order in [2, 3, 4, 8, 24] {
            for n in 1..=3 {
                let u = UnitaryMatrix::random(n, order, &mut rng);
                assert!(verify_unitary(u.matrix()), "order {order} n {n}: {u}");
            }
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(CycloMatrix::from_rows(vec![vec![c(1)], vec![c(1), c(2)]]).is_err());
        assert!(CycloMatrix::from_rows(vec![]).is_err());
    }
}
