use nalgebra::DMatrix;

use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::rational::{exact_root, to_f64, Rational};

use super::action::{rational_point, FiniteLinearGroup, TorusAction};
use super::form::{PolyForm, PolyVectorField};
use super::FoliationError;

/// Relative eigenvalue floor below which a Gram matrix counts as singular.
const DEGENERATE_RTOL: f64 = 1e-12;

/// The transverse datum replacing `g₁` on the normal bundle.
#[derive(Clone, Debug)]
pub enum TransverseMetric {
    /// `h(u, v) = ω(Ju, v)`, symmetrized.
    Form { omega: PolyForm, j: Vec<Vec<f64>> },
    Metric(MetricField),
}

impl TransverseMetric {
    fn eval(&self, point: &[f64]) -> Result<DMatrix<f64>, FoliationError> {
        match self {
            TransverseMetric::Form { omega, j } => {
                let om = to_dmatrix(&omega.two_form_matrix(point));
                let jm = to_dmatrix(j);
                let b = jm.transpose() * om;
                Ok((&b + b.transpose()) * 0.5)
            }
            TransverseMetric::Metric(m) => m.eval(point),
        }
    }
}

/// A Riemannian metric on ℝ^d, evaluated pointwise.
#[derive(Clone, Debug)]
pub enum MetricField {
    /// Symmetric matrix of polynomials.
    Poly(Vec<Vec<Poly>>),
    /// `c · g`.
    Scaled { factor: Rational, base: Box<MetricField> },
    /// `g₁ = u₀ g₀` with `u₀ = det(M₀)^{-1/m}` for the action's Gram matrix.
    Taut { base: Box<MetricField>, action: TorusAction },
    /// Torus average by equispaced quadrature.
    Averaged { base: Box<MetricField>, action: TorusAction, nodes: usize },
    /// `g₁` on the orbit directions, `h` on their `g₁`-orthogonal complement.
    Split { g1: Box<MetricField>, h: Box<TransverseMetric>, action: TorusAction },
}

impl MetricField {
    /// The Euclidean metric on ℝ^d. On a sphere it induces the round metric.
    pub fn flat(d: usize) -> Self {
        let entries = (0..d)
            .map(|i| (0..d).map(|j| if i == j { Poly::one(d) } else { Poly::zero(d) }).collect())
            .collect();
        MetricField::Poly(entries)
    }

    pub fn polynomial(entries: Vec<Vec<Poly>>) -> Result<Self, FoliationError> {
        let d = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != d {
                return Err(FoliationError::DimensionMismatch { expected: d, found: row.len() });
            }
            for (j, p) in row.iter().enumerate() {
                if p.nvars() != d {
                    return Err(FoliationError::DimensionMismatch { expected: d, found: p.nvars() });
                }
                if *p != entries[j][i] {
                    return Err(FoliationError::NotSymmetric);
                }
            }
        }
        Ok(MetricField::Poly(entries))
    }

    pub fn dim(&self) -> usize {
        match self {
            MetricField::Poly(e) => e.len(),
            MetricField::Scaled { base, .. }
            | MetricField::Taut { base, .. }
            | MetricField::Averaged { base, .. } => base.dim(),
            MetricField::Split { g1, .. } => g1.dim(),
        }
    }

    /// Largest total degree of the polynomial entries, when polynomial.
    pub fn polynomial_degree(&self) -> Option<u32> {
        match self {
            MetricField::Poly(e) => Some(e.iter().flatten().map(Poly::degree).max().unwrap_or(0)),
            MetricField::Scaled { base, .. } => base.polynomial_degree(),
            _ => None,
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<DMatrix<f64>, FoliationError> {
        match self {
            MetricField::Poly(e) => {
                let d = e.len();
                Ok(DMatrix::from_fn(d, d, |i, j| e[i][j].eval_f64(point)))
            }
            MetricField::Scaled { factor, base } => Ok(base.eval(point)? * to_f64(factor)),
            MetricField::Taut { base, action } => {
                let m0 = gram_matrix(base, &action.fundamental_fields(), point)?;
                let u0 = conformal_factor_f64(&m0, action.rank())?;
                Ok(base.eval(point)? * u0)
            }
            MetricField::Averaged { base, action, nodes } => {
                let grid = action.grid(*nodes);
                let d = self.dim();
                let mut acc = DMatrix::zeros(d, d);
                for t in &grid {
                    let r = to_dmatrix(&action.matrix(t));
                    let x = action.act(t, point);
                    acc += r.transpose() * base.eval(&x)? * &r;
                }
                Ok(acc / grid.len() as f64)
            }
            MetricField::Split { g1, h, action } => {
                let g1m = g1.eval(point)?;
                let e = field_matrix(&action.fundamental_fields(), point);
                let mv = e.transpose() * &g1m * &e;
                check_nondegenerate(&mv)?;
                let inv = mv.clone().try_inverse().ok_or(FoliationError::DegenerateOrbit)?;
                let pv = &e * inv * e.transpose() * &g1m;
                let pn = DMatrix::identity(self.dim(), self.dim()) - &pv;
                let hm = h.eval(point)?;
                Ok(pv.transpose() * g1m * &pv + pn.transpose() * hm * pn)
            }
        }
    }

    /// Exact value at a rational point, for polynomial metrics.
    pub fn eval_exact(&self, point: &[Rational]) -> Option<Matrix> {
        match self {
            MetricField::Poly(e) => Some(e.iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect()),
            MetricField::Scaled { factor, base } => base
                .eval_exact(point)
                .map(|m| m.into_iter().map(|r| r.into_iter().map(|x| x * factor).collect()).collect()),
            _ => None,
        }
    }
}

pub(crate) fn to_dmatrix(m: &[Vec<f64>]) -> DMatrix<f64> {
    let r = m.len();
    let c = m.first().map_or(0, Vec::len);
    DMatrix::from_fn(r, c, |i, j| m[i][j])
}

/// Columns are the fields evaluated at the point.
fn field_matrix(fields: &[PolyVectorField], point: &[f64]) -> DMatrix<f64> {
    let d = point.len();
    let cols: Vec<Vec<f64>> = fields.iter().map(|f| f.eval_f64(point)).collect();
    DMatrix::from_fn(d, fields.len(), |i, k| cols[k][i])
}

fn check_nondegenerate(m: &DMatrix<f64>) -> Result<(), FoliationError> {
    if m.nrows() == 0 {
        return Ok(());
    }
    let eig = m.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(0.0_f64, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if max <= 0.0 || min <= DEGENERATE_RTOL * max {
        return Err(FoliationError::DegenerateOrbit);
    }
    Ok(())
}

/// `M₀ = (g(e_k, e_l))` at a point.
pub fn gram_matrix(metric: &MetricField, fields: &[PolyVectorField], point: &[f64]) -> Result<DMatrix<f64>, FoliationError> {
    let d = metric.dim();
    if point.len() != d || fields.iter().any(|f| f.dim() != d) {
        return Err(FoliationError::DimensionMismatch { expected: d, found: point.len() });
    }
    let g = metric.eval(point)?;
    let e = field_matrix(fields, point);
    let m = e.transpose() * g * &e;
    check_nondegenerate(&m)?;
    Ok(m)
}

/// Exact Gram matrix of a polynomial metric at a rational point.
pub fn gram_matrix_exact(metric: &MetricField, fields: &[PolyVectorField], point: &[Rational]) -> Result<Matrix, FoliationError> {
    let g = metric.eval_exact(point).ok_or(FoliationError::NotPolynomial)?;
    let vecs: Vec<Vec<Rational>> = fields.iter().map(|f| f.eval(point)).collect();
    let m: Matrix = vecs
        .iter()
        .map(|u| vecs.iter().map(|v| bilinear(&g, u, v)).collect())
        .collect();
    if linalg::determinant(&m) == Rational::from_integer(0.into()) {
        return Err(FoliationError::DegenerateOrbit);
    }
    Ok(m)
}

fn bilinear(g: &Matrix, u: &[Rational], v: &[Rational]) -> Rational {
    let gv = linalg::mul_vec(g, v);
    u.iter().zip(&gv).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConformalFactor {
    Exact(Rational),
    Approx(f64),
}

impl ConformalFactor {
    pub fn to_f64(&self) -> f64 {
        match self {
            ConformalFactor::Exact(r) => to_f64(r),
            ConformalFactor::Approx(x) => *x,
        }
    }
}

/// `u₀ = det(M₀)^{-1/m}`, exact when the root is rational.
pub fn conformal_factor(m0: &Matrix, m: usize) -> Result<ConformalFactor, FoliationError> {
    let det = linalg::determinant(m0);
    if det <= Rational::from_integer(0.into()) {
        return Err(FoliationError::NonPositiveDeterminant);
    }
    Ok(match exact_root(&det, m as u32) {
        Some(root) => ConformalFactor::Exact(root.recip()),
        None => ConformalFactor::Approx(to_f64(&det).powf(-1.0 / m as f64)),
    })
}

pub fn conformal_factor_f64(m0: &DMatrix<f64>, m: usize) -> Result<f64, FoliationError> {
    let det = m0.determinant();
    if det.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(FoliationError::NonPositiveDeterminant);
    }
    Ok(det.powf(-1.0 / m as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GramValue {
    Exact(Matrix),
    Approx(DMatrix<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RescaledGram {
    pub m1: GramValue,
    /// `|det M₁ − 1|`, zero when exact.
    pub deviation: f64,
    pub passed: bool,
}

/// Tolerance for `det M₁ = 1` when the root is irrational.
pub const DET_TOL: f64 = 1e-12;

/// `M₁ = u₀ M₀` and the check `det M₁ = 1`.
pub fn rescaled_gram(m0: &Matrix, m: usize) -> Result<RescaledGram, FoliationError> {
    match conformal_factor(m0, m)? {
        ConformalFactor::Exact(u0) => {
            let m1: Matrix = m0.iter().map(|r| r.iter().map(|x| x * &u0).collect()).collect();
            let det = linalg::determinant(&m1);
            let deviation = to_f64(&(det.clone() - Rational::from_integer(1.into()))).abs();
            let passed = det == Rational::from_integer(1.into());
            Ok(RescaledGram { m1: GramValue::Exact(m1), deviation, passed })
        }
        ConformalFactor::Approx(u0) => {
            let d = m0.len();
            let m1 = DMatrix::from_fn(d, d, |i, j| to_f64(&m0[i][j]) * u0);
            let deviation = (m1.determinant() - 1.0).abs();
            Ok(RescaledGram { m1: GramValue::Approx(m1), deviation, passed: deviation <= DET_TOL })
        }
    }
}

pub fn rescaled_gram_f64(m0: &DMatrix<f64>, m: usize) -> Result<(DMatrix<f64>, f64), FoliationError> {
    let u0 = conformal_factor_f64(m0, m)?;
    let m1 = m0 * u0;
    let dev = (m1.determinant() - 1.0).abs();
    Ok((m1, dev))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceVerdict {
    pub passed: bool,
    pub max_dev: f64,
}

/// Compares a vector-valued field at `g·point` with its value at `point`
/// for each sampled group parameter.
pub fn orbit_invariance_check<F>(
    field: F,
    action: &TorusAction,
    point: &[f64],
    params: &[Vec<f64>],
    tol: f64,
) -> Result<InvarianceVerdict, FoliationError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, FoliationError>,
{
    let base = field(point)?;
    let mut max_dev: f64 = 0.0;
    for t in params {
        let value = field(&action.act(t, point))?;
        for (a, b) in value.iter().zip(&base) {
            max_dev = max_dev.max((a - b).abs());
        }
    }
    Ok(InvarianceVerdict { passed: max_dev <= tol, max_dev })
}

#[derive(Clone, Debug)]
pub enum Quadrature {
    Finite(FiniteLinearGroup),
    Torus { action: TorusAction, nodes: usize },
}

/// Node count per circle factor needed for exact averaging: entries of
/// degree `D` pulled back by rotations with weights up to `w` are
/// trigonometric polynomials of degree at most `(D + 2) w`.
pub fn required_nodes(metric_degree: u32, action: &TorusAction) -> usize {
    (metric_degree as usize + 2) * action.max_weight() as usize + 1
}

/// Averages a metric over a group; finite groups are summed exactly.
pub fn average_metric(metric: &MetricField, quadrature: &Quadrature) -> Result<MetricField, FoliationError> {
    match quadrature {
        Quadrature::Finite(group) => {
            let MetricField::Poly(entries) = metric else {
                return Err(FoliationError::NotPolynomial);
            };
            let d = entries.len();
            if group.dim() != d {
                return Err(FoliationError::DimensionMismatch { expected: d, found: group.dim() });
            }
            let mut acc = vec![vec![Poly::zero(d); d]; d];
            for a in &group.elements {
                let pulled: Vec<Vec<Poly>> =
                    entries.iter().map(|row| row.iter().map(|p| p.substitute_linear(a)).collect()).collect();
                // (Aᵀ g(Ax) A)_{ij} = Σ_{kl} A_{ki} g_{kl}(Ax) A_{lj}
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            if a[k][i] == Rational::from_integer(0.into()) {
                                continue;
                            }
                            for l in 0..d {
                                if a[l][j] == Rational::from_integer(0.into()) {
                                    continue;
                                }
                                let coeff = &a[k][i] * &a[l][j];
                                acc[i][j] = &acc[i][j] + &pulled[k][l].scale(&coeff);
                            }
                        }
                    }
                }
            }
            let inv = Rational::new(1.into(), (group.order() as i64).into());
            Ok(MetricField::Poly(acc.into_iter().map(|r| r.into_iter().map(|p| p.scale(&inv)).collect()).collect()))
        }
        Quadrature::Torus { action, nodes } => {
            if action.real_dim() != metric.dim() {
                return Err(FoliationError::DimensionMismatch { expected: metric.dim(), found: action.real_dim() });
            }
            let degree = metric.polynomial_degree().ok_or(FoliationError::NotPolynomial)?;
            let required = required_nodes(degree, action);
            if *nodes < required {
                return Err(FoliationError::QuadratureTooCoarse { nodes: *nodes, required });
            }
            Ok(MetricField::Averaged { base: Box::new(metric.clone()), action: action.clone(), nodes: *nodes })
        }
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `∫_{T^m} (det M(g·x))^{1/2} dt` by equispaced quadrature.
pub fn orbit_volume(metric: &MetricField, action: &TorusAction, point: &[f64], nodes: usize) -> Result<f64, FoliationError> {
    let fields = action.fundamental_fields();
    let grid = action.grid(nodes);
    let mut values = Vec::with_capacity(grid.len());
    for t in &grid {
        let m = gram_matrix(metric, &fields, &action.act(t, point))?;
        values.push(m.determinant().max(0.0).sqrt());
    }
    let cell = (std::f64::consts::TAU / nodes as f64).powi(action.rank() as i32);
    Ok(compensated_sum(values) * cell)
}

/// `g₁` along the orbits, `h` on their `g₁`-orthogonal complement.
pub fn split_metric(g1: &MetricField, h: TransverseMetric, action: &TorusAction) -> Result<MetricField, FoliationError> {
    if action.real_dim() != g1.dim() {
        return Err(FoliationError::DimensionMismatch { expected: g1.dim(), found: action.real_dim() });
    }
    Ok(MetricField::Split { g1: Box::new(g1.clone()), h: Box::new(h), action: action.clone() })
}

/// Exact rational point nearest to a float point, for exact spot checks.
pub fn exact_gram_at(metric: &MetricField, action: &TorusAction, point: &[f64]) -> Result<Matrix, FoliationError> {
    let p = rational_point(point).ok_or(FoliationError::NotPolynomial)?;
    gram_matrix_exact(metric, &action.fundamental_fields(), &p)
}
