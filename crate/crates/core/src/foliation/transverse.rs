use nalgebra::{DMatrix, DVector};

use crate::poly::Poly;

use super::form::{PolyForm, PolyVectorField};
use super::metric::to_dmatrix;
use super::FoliationError;

/// Eigenvalue floor for transverse positivity.
pub const POSITIVITY_TOL: f64 = 1e-9;

/// Complex structure on ℝ^{2n} × ℝ^extra acting on each `(x_j, y_j)` pair by
/// `J∂x = −∂y`, `J∂y = ∂x`, and by zero on the extra coordinates. With this
/// sign `ω(J·,·)` is the Euclidean product for `ω = Σ dx_j ∧ dy_j`.
pub fn standard_j(n: usize, extra: usize) -> Vec<Vec<f64>> {
    let d = 2 * n + extra;
    let mut j = vec![vec![0.0; d]; d];
    for k in 0..n {
        j[2 * k][2 * k + 1] = 1.0;
        j[2 * k + 1][2 * k] = -1.0;
    }
    j
}

/// `Σ dx_j ∧ dy_j` on ℝ^{2n} × ℝ^extra.
pub fn flat_kahler_form(n: usize, extra: usize) -> PolyForm {
    let d = 2 * n + extra;
    let mut w = PolyForm::zero(d, 2);
    for k in 0..n {
        w.add_term((1 << (2 * k)) | (1 << (2 * k + 1)), Poly::one(d));
    }
    w
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransverseVerdict {
    pub closed: bool,
    pub kernel: bool,
    pub positive: bool,
    /// Smallest eigenvalue of `ω(J·,·)` on the normal space over all samples.
    pub min_eigenvalue: f64,
    pub asymmetry: f64,
}

impl TransverseVerdict {
    pub fn passed(&self) -> bool {
        self.closed && self.kernel && self.positive
    }
}

/// Euclidean orthonormal basis of the complement of the columns of `v`.
fn normal_basis(v: &DMatrix<f64>) -> DMatrix<f64> {
    let d = v.nrows();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let candidates = (0..v.ncols()).map(|k| v.column(k).into_owned()).chain((0..d).map(|k| {
        let mut e = DVector::zeros(d);
        e[k] = 1.0;
        e
    }));
    for c in candidates {
        let mut w = c;
        for b in &basis {
            w -= b * b.dot(&w);
        }
        let norm = w.norm();
        if norm > 1e-10 {
            basis.push(w / norm);
        }
    }
    let normals: Vec<DVector<f64>> = basis.into_iter().skip(v.ncols()).collect();
    DMatrix::from_columns(&normals)
}

/// Closedness and vertical kernel exactly, positivity of `ω(J·,·)` on the
/// normal space numerically at each sample point.
pub fn transverse_kahler_check(
    omega: &PolyForm,
    j: &[Vec<f64>],
    vertical: &[PolyVectorField],
    points: &[Vec<f64>],
) -> Result<TransverseVerdict, FoliationError> {
    if omega.degree() != 2 {
        return Err(FoliationError::WrongDegree { expected: 2, found: omega.degree() });
    }
    let d = omega.dim();
    if j.len() != d || vertical.iter().any(|v| v.dim() != d) {
        return Err(FoliationError::DimensionMismatch { expected: d, found: j.len() });
    }
    let closed = omega.d().is_zero();
    let kernel = vertical.iter().all(|v| omega.interior(v).is_zero());
    let jm = to_dmatrix(j);
    let mut min_eig = f64::INFINITY;
    let mut asym: f64 = 0.0;
    for p in points {
        let cols: Vec<DVector<f64>> = vertical.iter().map(|v| DVector::from_vec(v.eval_f64(p))).collect();
        let vmat = if cols.is_empty() { DMatrix::zeros(d, 0) } else { DMatrix::from_columns(&cols) };
        let n = normal_basis(&vmat);
        let om = to_dmatrix(&omega.two_form_matrix(p));
        let b = n.transpose() * jm.transpose() * om * &n;
        asym = asym.max((&b - b.transpose()).abs().max());
        let sym = (&b + b.transpose()) * 0.5;
        if sym.nrows() > 0 {
            let e = sym.symmetric_eigen().eigenvalues.min();
            min_eig = min_eig.min(e);
        }
    }
    let positive = min_eig > POSITIVITY_TOL && asym <= POSITIVITY_TOL;
    Ok(TransverseVerdict { closed, kernel, positive, min_eigenvalue: min_eig, asymmetry: asym })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicVerdict {
    pub contraction: bool,
    pub d_contraction: bool,
}

impl BasicVerdict {
    pub fn passed(&self) -> bool {
        self.contraction && self.d_contraction
    }
}

/// `ι_Z α = 0` and `ι_Z dα = 0` as polynomial identities.
pub fn basic_form_check(alpha: &PolyForm, vertical: &[PolyVectorField]) -> BasicVerdict {
    let d_alpha = alpha.d();
    BasicVerdict {
        contraction: vertical.iter().all(|z| alpha.interior(z).is_zero()),
        d_contraction: vertical.iter().all(|z| d_alpha.interior(z).is_zero()),
    }
}

/// Coordinates `(x, y, θ)` on a product chart `U × U(1)` of ℂ with the
/// vertical field `∂θ`.
pub const PRODUCT_CHART_NAMES: [&str; 3] = ["x", "y", "t"];

pub fn product_chart_vertical() -> Vec<PolyVectorField> {
    vec![PolyVectorField::coordinate(3, 2)]
}

/// The transverse-Kähler fixtures on the product chart.
pub fn tk_fixture(name: &str) -> Option<PolyForm> {
    let flat = flat_kahler_form(1, 1);
    match name {
        "flat" => Some(flat),
        "perturbed" => {
            let x2 = crate::poly::parse_poly("x^2", &PRODUCT_CHART_NAMES).ok()?;
            let eta = PolyForm::monomial(x2, &[1]).ok()?;
            Some(flat.add(&eta.d()))
        }
        "theta-x" => PolyForm::monomial(Poly::one(3), &[2, 0]).ok(),
        _ => None,
    }
}

/// A `k × k` grid on `[−half, half]²` in the base, at θ ∈ {0, 1/2}.
pub fn product_chart_grid(k: usize, half: f64) -> Vec<Vec<f64>> {
    let step = if k > 1 { 2.0 * half / (k - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(2 * k * k);
    for theta in [0.0, 0.5] {
        for a in 0..k {
            for b in 0..k {
                out.push(vec![-half + a as f64 * step, -half + b as f64 * step, theta]);
            }
        }
    }
    out
}

/// The basic-form fixtures with their expected verdicts.
pub fn basic_fixtures() -> Vec<(&'static str, PolyForm, bool)> {
    let p = |s: &str| crate::poly::parse_poly(s, &PRODUCT_CHART_NAMES).expect("fixture polynomial");
    vec![
        ("dx", PolyForm::monomial(Poly::one(3), &[0]).expect("fixture"), true),
        ("dt", PolyForm::monomial(Poly::one(3), &[2]).expect("fixture"), false),
        ("x_dy", PolyForm::monomial(p("x"), &[1]).expect("fixture"), true),
        ("t_dy", PolyForm::monomial(p("t"), &[1]).expect("fixture"), false),
    ]
}
