use std::collections::BTreeMap;
use std::fmt;

use crate::poly::Poly;
use crate::rational::Rational;

use super::FoliationError;

/// Sorted index set stored as a bitmask (bit `k` set ⇔ `dx_k` present).
pub type IndexSet = u64;

fn indices(mask: IndexSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&k| mask & (1 << k) != 0)
}

/// `(-1)^{#(i ∈ a, j ∈ b, i > j)}`, the sign of `dx_a ∧ dx_b` against the
/// sorted wedge.
fn shuffle_sign(a: IndexSet, b: IndexSet) -> i64 {
    let mut inversions = 0;
    for j in indices(b) {
        inversions += (a >> (j + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A homogeneous differential form with polynomial coefficients on ℝ^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<IndexSet, Poly>,
}

impl PolyForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= 64, "at most 64 coordinates");
        Self { dim, degree, terms: BTreeMap::new() }
    }

    pub fn function(f: Poly) -> Self {
        let mut out = Self::zero(f.nvars(), 0);
        out.add_term(0, f);
        out
    }

    /// `dx_k`.
    pub fn coordinate(dim: usize, k: usize) -> Self {
        let mut out = Self::zero(dim, 1);
        out.add_term(1 << k, Poly::one(dim));
        out
    }

    /// `f dx_{i_1} ∧ … ∧ dx_{i_p}` with the indices in any order.
    pub fn monomial(f: Poly, idx: &[usize]) -> Result<Self, FoliationError> {
        let dim = f.nvars();
        let mut out = Self::function(f);
        for &k in idx {
            if k >= dim {
                return Err(FoliationError::DimensionMismatch { expected: dim, found: k + 1 });
            }
            out = out.wedge(&Self::coordinate(dim, k));
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (IndexSet, &Poly)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn coefficient(&self, idx: &[usize]) -> Poly {
        let mask = idx.iter().fold(0, |m, &k| m | (1 << k));
        self.terms.get(&mask).cloned().unwrap_or_else(|| Poly::zero(self.dim))
    }

    pub fn add_term(&mut self, mask: IndexSet, coeff: Poly) {
        assert_eq!(mask.count_ones() as usize, self.degree, "term degree");
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&mask) {
            Some(existing) => &existing + &coeff,
            None => coeff,
        };
        if !sum.is_zero() {
            self.terms.insert(mask, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.dim, self.degree), (other.dim, other.degree), "form shape mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Rational::from_integer((-1).into())))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, p) in &self.terms {
            out.add_term(*m, p.scale(c));
        }
        out
    }

    pub fn mul_function(&self, f: &Poly) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (m, p) in &self.terms {
            out.add_term(*m, p * f);
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "form dimension mismatch");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                let prod = p * q;
                let prod = if shuffle_sign(*a, *b) < 0 { -&prod } else { prod };
                out.add_term(a | b, prod);
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree + 1);
        for (mask, p) in &self.terms {
            for k in 0..self.dim {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let dp = p.derivative(k);
                if dp.is_zero() {
                    continue;
                }
                let dp = if shuffle_sign(1 << k, *mask) < 0 { -&dp } else { dp };
                out.add_term(mask | (1 << k), dp);
            }
        }
        out
    }

    /// Contraction `ι_Z` with a polynomial vector field.
    pub fn interior(&self, z: &PolyVectorField) -> Self {
        assert_eq!(self.dim, z.dim(), "field dimension mismatch");
        if self.degree == 0 {
            return Self::zero(self.dim, 0);
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (mask, p) in &self.terms {
            for (r, k) in indices(*mask).enumerate() {
                let zk = &z.components[k];
                if zk.is_zero() {
                    continue;
                }
                let term = p * zk;
                let term = if r % 2 == 1 { -&term } else { term };
                out.add_term(mask & !(1 << k), term);
            }
        }
        out
    }

    /// Pullback along a polynomial map `ℝ^target → ℝ^dim` given by its
    /// component polynomials.
    pub fn pullback(&self, map: &[Poly]) -> Self {
        assert_eq!(map.len(), self.dim, "one component per source coordinate");
        let target = map.first().map_or(0, Poly::nvars);
        let dmap: Vec<PolyForm> = map.iter().map(|f| PolyForm::function(f.clone()).d()).collect();
        let mut out = Self::zero(target, self.degree);
        for (mask, p) in &self.terms {
            let mut acc = PolyForm::function(p.compose(map));
            for k in indices(*mask) {
                acc = acc.wedge(&dmap[k]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Coefficient matrix of a 2-form at a point, `Ω[i][j] = ω(∂_i, ∂_j)`.
    pub fn two_form_matrix(&self, point: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(self.degree, 2, "two_form_matrix needs a 2-form");
        let mut m = vec![vec![0.0; self.dim]; self.dim];
        for (mask, p) in &self.terms {
            let mut it = indices(*mask);
            let (i, j) = (it.next().unwrap(), it.next().unwrap());
            let v = p.eval_f64(point);
            m[i][j] += v;
            m[j][i] -= v;
        }
        m
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(mask, p)| {
                let legs: Vec<String> = indices(*mask).map(|k| format!("d{}", names[k])).collect();
                if legs.is_empty() {
                    format!("({})", p.display_with(names))
                } else {
                    format!("({}) {}", p.display_with(names), legs.join("^"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.dim).map(|k| format!("x{}", k + 1)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    pub components: Vec<Poly>,
}

impl PolyVectorField {
    pub fn new(components: Vec<Poly>) -> Self {
        Self { components }
    }

    /// `∂_k`.
    pub fn coordinate(dim: usize, k: usize) -> Self {
        let mut components = vec![Poly::zero(dim); dim];
        components[k] = Poly::one(dim);
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, point: &[Rational]) -> Vec<Rational> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    pub fn eval_f64(&self, point: &[f64]) -> Vec<f64> {
        self.components.iter().map(|p| p.eval_f64(point)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::rational::int;

    const NAMES: [&str; 3] = ["x", "y", "t"];

    fn p(s: &str) -> Poly {
        parse_poly(s, &NAMES).unwrap()
    }

    fn form(f: &str, idx: &[usize]) -> PolyForm {
        PolyForm::monomial(p(f), idx).unwrap()
    }

    #[test]
    fn wedge_signs() {
        let dx = PolyForm::coordinate(3, 0);
        let dy = PolyForm::coordinate(3, 1);
        assert_eq!(dy.wedge(&dx), dx.wedge(&dy).scale(&int(-1)));
        assert!(dx.wedge(&dx).is_zero());
        assert_eq!(form("1", &[1, 0]).coefficient(&[0, 1]), p("-1"));
    }

    #[test]
    fn exterior_derivative() {
        // d(x^2 dy) = 2x dx^dy
        assert_eq!(form("x^2", &[1]).d(), form("2x", &[0, 1]));
        // d(y dx) = -dx^dy
        assert_eq!(form("y", &[0]).d(), form("-1", &[0, 1]));
        let f = PolyForm::function(p("x^2 y + t^3"));
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn contraction() {
        let dt = PolyVectorField::coordinate(3, 2);
        assert_eq!(form("1", &[2, 0]).interior(&dt), form("1", &[0]));
        assert_eq!(form("1", &[0, 2]).interior(&dt), form("-1", &[0]));
        assert!(form("x", &[0, 1]).interior(&dt).is_zero());
    }

    #[test]
    fn pullback_of_area_form() {
        // polar-like map (r, s) -> (r^2, s) pulls dx^dy back to 2r dr^ds
        let map = vec![parse_poly("r^2", &["r", "s"]).unwrap(), parse_poly("s", &["r", "s"]).unwrap()];
        let area = PolyForm::monomial(Poly::one(2), &[0, 1]).unwrap();
        let expected = PolyForm::monomial(parse_poly("2r", &["r", "s"]).unwrap(), &[0, 1]).unwrap();
        assert_eq!(area.pullback(&map), expected);
    }

    #[test]
    fn two_form_matrix_antisymmetric() {
        let w = form("1 + 2x", &[0, 1]);
        let m = w.two_form_matrix(&[0.25, 0.0, 0.0]);
        assert_eq!(m[0][1], 1.5);
        assert_eq!(m[1][0], -1.5);
    }
}
