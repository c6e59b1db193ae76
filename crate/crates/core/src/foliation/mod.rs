//! Polynomial exterior calculus, torus actions and metrics on chart-level
//! models of the frame bundle: Gram matrices of fundamental fields, the taut
//! conformal rescaling, metric splitting and transverse Kähler checks.

pub mod action;
pub mod form;
pub mod metric;
pub mod taut;
pub mod transverse;

pub use action::{FiniteLinearGroup, TorusAction};
pub use form::{PolyForm, PolyVectorField};
pub use metric::{
    average_metric, conformal_factor, conformal_factor_f64, gram_matrix, gram_matrix_exact, orbit_invariance_check,
    orbit_volume, rescaled_gram, split_metric, ConformalFactor, MetricField, Quadrature, TransverseMetric,
};
pub use taut::{run_taut_suite, TautConfig, TautReport};
pub use transverse::{
    basic_fixtures, basic_form_check, product_chart_grid, product_chart_vertical, standard_j, tk_fixture,
    transverse_kahler_check, BasicVerdict, TransverseVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FoliationError {
    #[error("Gram matrix is singular: the orbit is not of full dimension")]
    DegenerateOrbit,
    #[error("Gram determinant is not positive")]
    NonPositiveDeterminant,
    #[error("quadrature with {nodes} nodes is too coarse, need at least {required}")]
    QuadratureTooCoarse { nodes: usize, required: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("expected a form of degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("metric entries are not symmetric")]
    NotSymmetric,
    #[error("operation needs a polynomial metric")]
    NotPolynomial,
    #[error("invalid action: {0}")]
    InvalidAction(String),
}
