//! Exact and numeric checks for Kähler orbifolds: orbifold atlases, the
//! unitary frame bundle resolution, taut transversely Kähler metrics, and
//! Hard Lefschetz / Poincaré duality on invariant simplicial cohomology.

pub mod atlas;
pub mod catalog;
pub mod cohomology;
pub mod cyclotomic;
pub mod foliation;
pub mod frame;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod rational;
pub mod report;
pub mod scenario;
