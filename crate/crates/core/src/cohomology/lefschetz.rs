use num_traits::{One, Zero};

use crate::linalg::{self, Matrix};
use crate::rational::{common_denominator, int, Rational};

use std::sync::Arc;

use super::action::SimplicialGroupAction;
use super::cochain::{cup_product, pair, Chain, Cochain, CohomologyData};
use super::invariant::{invariant_cohomology, InvariantCohomology};
use super::orientation::fundamental_cycle;
use super::product::ProductComplex;
use super::CohomologyError;

/// Number of deterministic integer combinations tried when no single basis
/// class (or their sum) has nonzero top power.
const COMBINATION_TRIES: usize = 32;

#[derive(Clone, Debug)]
pub struct KahlerClassRep {
    pub cocycle: Cochain,
    /// `⟨ω^n, [M]⟩`.
    pub top_pairing: Rational,
}

/// `ω^k` as a `2k`-cochain (`ω^0` is the unit 0-cocycle).
pub fn power(data: &CohomologyData, omega: &[Rational], k: usize) -> Cochain {
    let mut acc: Cochain = vec![Rational::one(); data.complex().count(0)];
    for i in 0..k {
        acc = cup_product(data.complex(), 2 * i, &acc, 2, omega);
    }
    acc
}

/// `⟨ω^n, [M]⟩`.
pub fn top_pairing(data: &CohomologyData, omega: &[Rational], n: usize, fundamental: &Chain) -> Rational {
    pair(&power(data, omega, n), fundamental)
}

/// Checks an explicit candidate: a cocycle with invariant class and nonzero
/// top power.
pub fn kahler_from_cocycle(
    data: &CohomologyData,
    inv: &InvariantCohomology,
    omega: Cochain,
    n: usize,
    fundamental: &Chain,
) -> Result<KahlerClassRep, CohomologyError> {
    if !data.is_cocycle(2, &omega) {
        return Err(CohomologyError::NotACocycle);
    }
    let coords = data.coordinates(2, &omega);
    if inv.degrees[2].express(&coords).is_none() {
        return Err(CohomologyError::NotInvariant);
    }
    let value = top_pairing(data, &omega, n, fundamental);
    if value.is_zero() {
        return Err(CohomologyError::NoKahlerClass);
    }
    Ok(scale_to_integer(KahlerClassRep { cocycle: omega, top_pairing: value }, n))
}

fn scale_to_integer(rep: KahlerClassRep, n: usize) -> KahlerClassRep {
    if rep.top_pairing.is_integer() {
        return rep;
    }
    let d = Rational::from_integer(common_denominator(rep.cocycle.iter()));
    let factor = num_traits::pow(d.clone(), n);
    KahlerClassRep {
        cocycle: rep.cocycle.iter().map(|x| x * &d).collect(),
        top_pairing: rep.top_pairing * factor,
    }
}

/// Deterministic candidate coefficient vectors for an `r`-dimensional space:
/// unit vectors, the all-ones vector, then small integer combinations.
fn candidates(r: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for i in 0..r {
        out.push((0..r).map(|j| int(i64::from(i == j))).collect());
    }
    if r > 1 {
        out.push(vec![int(1); r]);
    }
    for t in 1..=COMBINATION_TRIES {
        let v: Vec<Rational> = (0..r).map(|i| int(((t * (2 * i + 3) + i * i) % 5) as i64 - 2)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            out.push(v);
        }
    }
    out
}

/// An invariant degree-2 class with `⟨ω^n, [M]⟩ ≠ 0`.
pub fn kahler_class(
    data: &CohomologyData,
    inv: &InvariantCohomology,
    n: usize,
    fundamental: &Chain,
) -> Result<KahlerClassRep, CohomologyError> {
    if data.dim() < 2 {
        return Err(CohomologyError::NoKahlerClass);
    }
    let basis = &inv.degrees[2];
    for coeffs in candidates(basis.dim()) {
        let mut omega = vec![Rational::zero(); data.complex().count(2)];
        for (c, h) in coeffs.iter().zip(&basis.cocycles) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in omega.iter_mut().zip(h) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        let value = top_pairing(data, &omega, n, fundamental);
        if !value.is_zero() {
            return Ok(scale_to_integer(KahlerClassRep { cocycle: omega, top_pairing: value }, n));
        }
    }
    Err(CohomologyError::NoKahlerClass)
}

/// `π₁*ω₁ + π₂*ω₂` on a product, each factor class scaled so that its top
/// power pairs to 1 with the factor's fundamental cycle when that factor is
/// a surface.
pub fn product_kahler_class(
    product: &ProductComplex,
    data: &CohomologyData,
    inv: &InvariantCohomology,
    n: usize,
    fundamental: &Chain,
) -> Result<KahlerClassRep, CohomologyError> {
    let factor_class = |k: &super::complex::SimplicialComplex| -> Result<Cochain, CohomologyError> {
        if !k.dim().is_multiple_of(2) {
            return Err(CohomologyError::NoKahlerClass);
        }
        let fdata = CohomologyData::compute(Arc::new(k.clone()))?;
        let finv = invariant_cohomology(&fdata, &SimplicialGroupAction::trivial(k.vertex_count()))?;
        let cycle = fundamental_cycle(k)?;
        let rep = kahler_class(&fdata, &finv, k.dim() / 2, &cycle)?;
        let scale = rep.top_pairing.recip();
        Ok(rep.cocycle.iter().map(|x| x * &scale).collect())
    };
    let w1 = product.pullback_left(2, &factor_class(&product.left)?);
    let w2 = product.pullback_right(2, &factor_class(&product.right)?);
    let omega: Cochain = w1.iter().zip(&w2).map(|(a, b)| a + b).collect();
    kahler_from_cocycle(data, inv, omega, n, fundamental)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzEntry {
    pub k: usize,
    /// Invariant dimension of the target `H^{n+k}`.
    pub rows: usize,
    /// Invariant dimension of the source `H^{n−k}`.
    pub cols: usize,
    pub rank: usize,
    pub iso: bool,
    pub matrix: Matrix,
}

/// Coordinates in the invariant basis of degree `p` of the class of `c`.
fn invariant_coordinates(
    data: &CohomologyData,
    inv: &InvariantCohomology,
    p: usize,
    c: &[Rational],
) -> Result<Vec<Rational>, CohomologyError> {
    inv.degrees[p].express(&data.coordinates(p, c)).ok_or(CohomologyError::NotInvariant)
}

/// The matrix of `α ↦ α ∪ ω^k` from invariant `H^{n−k}` to invariant
/// `H^{n+k}`; ISO iff square and of full rank.
pub fn lefschetz_verify(
    data: &CohomologyData,
    inv: &InvariantCohomology,
    omega: &[Rational],
    n: usize,
    k: usize,
) -> Result<LefschetzEntry, CohomologyError> {
    if k > n || 2 * n > data.dim() {
        return Err(CohomologyError::DegreeOutOfRange(k));
    }
    let source = &inv.degrees[n - k];
    let rows = inv.degrees[n + k].dim();
    let wk = power(data, omega, k);
    let mut columns = Vec::with_capacity(source.dim());
    for a in &source.cocycles {
        let image = cup_product(data.complex(), n - k, a, 2 * k, &wk);
        columns.push(invariant_coordinates(data, inv, n + k, &image)?);
    }
    let matrix: Matrix = (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let rank = if rows == 0 { 0 } else { linalg::rank(&matrix) };
    let cols = source.dim();
    Ok(LefschetzEntry { k, rows, cols, rank, iso: rows == cols && rank == cols, matrix })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityEntry {
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub passed: bool,
}

/// Pairing matrices `(α, β) ↦ ⟨α ∪ β, [M]⟩` on invariant
/// `H^p × H^{dim−p}` for every `p`.
pub fn poincare_duality_verify(
    data: &CohomologyData,
    inv: &InvariantCohomology,
    fundamental: &Chain,
) -> Vec<DualityEntry> {
    let top = data.dim();
    (0..=top)
        .map(|p| {
            let a = &inv.degrees[p].cocycles;
            let b = &inv.degrees[top - p].cocycles;
            let m: Matrix = a
                .iter()
                .map(|x| b.iter().map(|y| pair(&cup_product(data.complex(), p, x, top - p, y), fundamental)).collect())
                .collect();
            let rank = if a.is_empty() || b.is_empty() { 0 } else { linalg::rank(&m) };
            DualityEntry { p, rows: a.len(), cols: b.len(), rank, passed: a.len() == b.len() && rank == a.len() }
        })
        .collect()
}
