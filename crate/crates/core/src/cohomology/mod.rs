//! Rational simplicial cohomology of finite global quotients `Γ\X`,
//! computed as the Γ-invariant part of `H*(X; ℚ)`, with Alexander–Whitney
//! cup products, Hard Lefschetz matrices and Poincaré duality pairings.

pub mod action;
pub mod cochain;
pub mod complex;
pub mod invariant;
pub mod lefschetz;
pub mod orientation;
pub mod product;
pub mod reduction;

pub use action::{verify_action, SimplicialGroupAction};
pub use cochain::{cup_product, Chain, Cochain, CohomologyData};
pub use complex::SimplicialComplex;
pub use invariant::{invariant_cohomology, invariant_projection, InvariantCohomology};
pub use lefschetz::{kahler_class, lefschetz_verify, poincare_duality_verify, KahlerClassRep, LefschetzEntry};
pub use orientation::{fundamental_cycle, quotient_fundamental_cycle};
pub use product::{product_complex, ProductComplex};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("facet {0:?} repeats a vertex")]
    DuplicateVertexInFacet(Vec<usize>),
    #[error("complex has no facets or an empty facet")]
    EmptyComplex,
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("group has more than {0} elements")]
    GroupTooLarge(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("vertex map {0} is not simplicial")]
    NotSimplicial(String),
    #[error("not a closed pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("NonOrientable")]
    NonOrientable,
    #[error("no invariant degree-2 class has nonzero top power")]
    NoKahlerClass,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("class is not invariant")]
    NotInvariant,
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("integer coefficient overflow during reduction")]
    CoefficientOverflow,
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
