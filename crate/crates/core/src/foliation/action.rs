use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::rational::{int, to_f64, Rational};

use super::form::PolyVectorField;
use super::FoliationError;

/// A linear torus action on ℂⁿ = ℝ^{2n} with coordinates
/// `(x_1, y_1, …, x_n, y_n)`: circle factor `k` acts by
/// `z_j ↦ e^{i w_{kj} t} z_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusAction {
    weights: Vec<Vec<i64>>,
    n: usize,
}

impl TorusAction {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self, FoliationError> {
        let n = weights.first().map_or(0, Vec::len);
        if n == 0 || weights.iter().any(|w| w.len() != n) {
            return Err(FoliationError::InvalidAction("weight rows must be nonempty and equal length".into()));
        }
        Ok(Self { weights, n })
    }

    /// The circle acting with one weight per complex coordinate.
    pub fn circle(weights: &[i64]) -> Result<Self, FoliationError> {
        Self::new(vec![weights.to_vec()])
    }

    /// The standard `n`-torus acting coordinate-wise.
    pub fn standard_torus(n: usize) -> Self {
        let weights = (0..n).map(|k| (0..n).map(|j| i64::from(j == k)).collect()).collect();
        Self { weights, n }
    }

    /// Group dimension `m`.
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn real_dim(&self) -> usize {
        2 * self.n
    }

    pub fn weights(&self) -> &[Vec<i64>] {
        &self.weights
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().flatten().map(|w| w.unsigned_abs()).max().unwrap_or(0)
    }

    /// The fundamental field of circle factor `k`: `(ẋ_j, ẏ_j) = w (−y_j, x_j)`.
    pub fn fundamental_field(&self, k: usize) -> PolyVectorField {
        let d = self.real_dim();
        let mut comps = vec![Poly::zero(d); d];
        for (j, &w) in self.weights[k].iter().enumerate() {
            comps[2 * j] = Poly::var(d, 2 * j + 1).scale(&int(-w));
            comps[2 * j + 1] = Poly::var(d, 2 * j).scale(&int(w));
        }
        PolyVectorField::new(comps)
    }

    pub fn fundamental_fields(&self) -> Vec<PolyVectorField> {
        (0..self.rank()).map(|k| self.fundamental_field(k)).collect()
    }

    /// Rotation angles per complex coordinate for group parameters `t`.
    fn angles(&self, t: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.weights.iter().zip(t).map(|(w, tk)| w[j] as f64 * tk).sum())
            .collect()
    }

    /// The real `2n × 2n` matrix of the group element with parameters `t`.
    pub fn matrix(&self, t: &[f64]) -> Vec<Vec<f64>> {
        let d = self.real_dim();
        let mut m = vec![vec![0.0; d]; d];
        for (j, a) in self.angles(t).into_iter().enumerate() {
            let (s, c) = a.sin_cos();
            m[2 * j][2 * j] = c;
            m[2 * j][2 * j + 1] = -s;
            m[2 * j + 1][2 * j] = s;
            m[2 * j + 1][2 * j + 1] = c;
        }
        m
    }

    pub fn act(&self, t: &[f64], point: &[f64]) -> Vec<f64> {
        mat_vec(&self.matrix(t), point)
    }

    /// Equispaced nodes on `T^m`, `nodes` per circle factor, in
    /// lexicographic order.
    pub fn grid(&self, nodes: usize) -> Vec<Vec<f64>> {
        let m = self.rank();
        let step = std::f64::consts::TAU / nodes as f64;
        let total = nodes.pow(m as u32);
        (0..total)
            .map(|mut code| {
                (0..m)
                    .map(|_| {
                        let k = code % nodes;
                        code /= nodes;
                        k as f64 * step
                    })
                    .collect()
            })
            .collect()
    }
}

/// A finite group of real linear isometries with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLinearGroup {
    pub elements: Vec<Matrix>,
}

impl FiniteLinearGroup {
    pub fn new(elements: Vec<Matrix>) -> Result<Self, FoliationError> {
        let d = elements.first().map_or(0, Vec::len);
        if d == 0 || elements.iter().any(|g| g.len() != d || g.iter().any(|r| r.len() != d)) {
            return Err(FoliationError::InvalidAction("elements must be square of equal size".into()));
        }
        Ok(Self { elements })
    }

    /// `{±I}` on ℝ^d.
    pub fn plus_minus(d: usize) -> Self {
        let id = crate::linalg::identity(d);
        let minus: Matrix = id.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Self { elements: vec![id, minus] }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].len()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrices_f64(&self) -> Vec<Vec<Vec<f64>>> {
        self.elements.iter().map(|g| g.iter().map(|r| r.iter().map(to_f64).collect()).collect()).collect()
    }
}

pub(crate) fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub(crate) fn rational_point(point: &[f64]) -> Option<Vec<Rational>> {
    point.iter().map(|&x| Rational::from_float(x)).collect()
}
