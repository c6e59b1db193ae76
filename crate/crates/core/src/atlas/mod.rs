//! Orbifold atlases with flat charts, finite unitary chart groups and
//! unitary-affine changes of charts, all in exact cyclotomic arithmetic.

mod group;
mod matrix;

use std::cmp::Ordering;

use num_traits::Signed;

pub use group::{group_closure, stabilizer, FiniteMatrixGroup};
pub use matrix::{
    add_vectors, format_vector, norm_squared, sub_vectors, verify_unitary, CycloMatrix, CycloVector,
    UnitaryMatrix,
};

use crate::cyclotomic::Cyclotomic;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AtlasError {
    #[error("matrix rows have inconsistent lengths or the matrix is empty")]
    RaggedMatrix,
    #[error("matrix {0} is not unitary")]
    NonUnitary(String),
    #[error("no generators given")]
    EmptyGenerators,
    #[error("generator {index} is not unitary")]
    NonUnitaryGenerator { index: usize },
    #[error("closure exceeded {cap} elements")]
    ClosureExceedsCap { cap: usize },
    #[error("group elements or charts have different dimensions")]
    DimensionMismatch,
    #[error("group element {0} listed twice (non-faithful presentation)")]
    DuplicateElement(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("several group elements relate the two changes of charts")]
    MultipleWitnesses,
    #[error("changes of charts do not share source chart, target chart and source domain")]
    IncompatibleChanges,
    #[error("unknown chart id {0}")]
    UnknownChart(usize),
    #[error("duplicate chart id {0}")]
    DuplicateChart(usize),
    #[error("declared overlap {0} -> {1} has no change of charts")]
    UncoveredOverlap(usize, usize),
    #[error("change {from} -> {to}: {message}")]
    MalformedChange { from: usize, to: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Radius {
    Finite(Rational),
    Infinite,
}

impl Radius {
    /// Open-ball membership of a point centered at the origin.
    pub fn contains(&self, point: &[Cyclotomic]) -> Option<bool> {
        match self {
            Radius::Infinite => Some(true),
            Radius::Finite(r) => strictly_inside(&norm_squared(point), r),
        }
    }
}

/// `|v|² < r²` with a certified sign; `None` if undecidable in double precision.
fn strictly_inside(norm_sq: &Cyclotomic, r: &Rational) -> Option<bool> {
    let r2 = Cyclotomic::from_rational(r * r);
    (&r2 - norm_sq).real_sign().map(|s| s == Ordering::Greater)
}

/// A flat chart `U_i ⊂ ℂⁿ` (an origin-centered ball) with its finite group.
#[derive(Clone, Debug)]
pub struct Chart {
    pub id: usize,
    pub n: usize,
    pub radius: Radius,
    pub cyclotomic_order: u32,
    pub group: FiniteMatrixGroup,
}

impl Chart {
    pub fn new(id: usize, radius: Radius, cyclotomic_order: u32, group: FiniteMatrixGroup) -> Self {
        Self { id, n: group.dim(), radius, cyclotomic_order, group }
    }
}

/// A unitary-affine change of charts `z ↦ Uz + b` on the ball `W_i`.
#[derive(Clone, Debug)]
pub struct ChangeOfChart {
    pub source: usize,
    pub target: usize,
    pub linear: CycloMatrix,
    pub offset: CycloVector,
    pub center: CycloVector,
    pub radius: Rational,
}

impl ChangeOfChart {
    pub fn new(
        source: usize,
        target: usize,
        linear: CycloMatrix,
        offset: CycloVector,
        center: CycloVector,
        radius: Rational,
    ) -> Result<Self, AtlasError> {
        let malformed = |message: &str| AtlasError::MalformedChange { from: source, to: target, message: message.into() };
        if !linear.is_square() {
            return Err(malformed("linear part is not square"));
        }
        if offset.len() != linear.rows() || center.len() != linear.rows() {
            return Err(malformed("offset and center must have the chart dimension"));
        }
        if !radius.is_positive() {
            return Err(malformed("source radius must be positive"));
        }
        Ok(Self { source, target, linear, offset, center, radius })
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, x: &[Cyclotomic]) -> CycloVector {
        add_vectors(&self.linear.apply(x), &self.offset)
    }

    /// Whether `x` lies in the open source ball `W_i`.
    pub fn source_contains(&self, x: &[Cyclotomic]) -> Option<bool> {
        strictly_inside(&norm_squared(&sub_vectors(x, &self.center)), &self.radius)
    }

    pub fn same_source_domain(&self, other: &Self) -> bool {
        self.source == other.source && self.center == other.center && self.radius == other.radius
    }

    /// `g ∘ self` for a linear `g` on the target chart.
    pub fn post_compose(&self, g: &CycloMatrix) -> Self {
        Self {
            source: self.source,
            target: self.target,
            linear: g.mul(&self.linear),
            offset: g.apply(&self.offset),
            center: self.center.clone(),
            radius: self.radius.clone(),
        }
    }

    /// `self ∘ g⁻¹`, defined on `g·W_i`, for a unitary `g` on the source chart.
    pub fn pre_compose_inverse(&self, g: &UnitaryMatrix) -> Self {
        let inv = g.inverse();
        Self {
            source: self.source,
            target: self.target,
            linear: self.linear.mul(inv.matrix()),
            offset: self.offset.clone(),
            center: g.apply(&self.center),
            radius: self.radius.clone(),
        }
    }

    pub fn label(&self) -> String {
        format!("{}.{}", self.source, self.target)
    }
}

#[derive(Clone, Debug)]
pub struct OrbifoldAtlas {
    charts: Vec<Chart>,
    changes: Vec<ChangeOfChart>,
    overlaps: Vec<(usize, usize)>,
}

impl OrbifoldAtlas {
    /// Builds an atlas; when `overlaps` is `None` it is derived from the
    /// changes of charts.
    pub fn new(
        charts: Vec<Chart>,
        changes: Vec<ChangeOfChart>,
        overlaps: Option<Vec<(usize, usize)>>,
    ) -> Result<Self, AtlasError> {
        for (i, c) in charts.iter().enumerate() {
            if charts[..i].iter().any(|d| d.id == c.id) {
                return Err(AtlasError::DuplicateChart(c.id));
            }
        }
        if let Some(first) = charts.first() {
            if charts.iter().any(|c| c.n != first.n) {
                return Err(AtlasError::DimensionMismatch);
            }
        }
        let has_chart = |id: usize| charts.iter().any(|c| c.id == id);
        for ch in &changes {
            for id in [ch.source, ch.target] {
                if !has_chart(id) {
                    return Err(AtlasError::UnknownChart(id));
                }
            }
            if charts.first().is_some_and(|c| c.n != ch.dim()) {
                return Err(AtlasError::DimensionMismatch);
            }
        }
        let overlaps = match overlaps {
            Some(list) => {
                for &(i, j) in &list {
                    if !has_chart(i) {
                        return Err(AtlasError::UnknownChart(i));
                    }
                    if !has_chart(j) {
                        return Err(AtlasError::UnknownChart(j));
                    }
                    if !changes.iter().any(|c| c.source == i && c.target == j) {
                        return Err(AtlasError::UncoveredOverlap(i, j));
                    }
                }
                list
            }
            None => {
                let mut list: Vec<(usize, usize)> = changes.iter().map(|c| (c.source, c.target)).collect();
                list.sort_unstable();
                list.dedup();
                list
            }
        };
        Ok(Self { charts, changes, overlaps })
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn changes(&self) -> &[ChangeOfChart] {
        &self.changes
    }

    pub fn overlaps(&self) -> &[(usize, usize)] {
        &self.overlaps
    }

    pub fn chart(&self, id: usize) -> Option<&Chart> {
        self.charts.iter().find(|c| c.id == id)
    }

    pub fn dim(&self) -> usize {
        self.charts.first().map_or(0, |c| c.n)
    }

    pub fn changes_between(&self, source: usize, target: usize) -> Vec<ChangeOfChart> {
        self.changes.iter().filter(|c| c.source == source && c.target == target).cloned().collect()
    }

    /// Same atlas with one chart group replaced.
    pub fn with_group(&self, chart: usize, group: FiniteMatrixGroup) -> Result<Self, AtlasError> {
        let mut out = self.clone();
        let c = out.charts.iter_mut().find(|c| c.id == chart).ok_or(AtlasError::UnknownChart(chart))?;
        c.n = group.dim();
        c.group = group;
        Ok(out)
    }
}

/// The unique `g ∈ Γ_j` with `φ′ = g ∘ φ`, if any.
pub fn equivalent_changes(
    phi: &ChangeOfChart,
    phi_prime: &ChangeOfChart,
    group_j: &FiniteMatrixGroup,
) -> Result<Option<UnitaryMatrix>, AtlasError> {
    if !phi.same_source_domain(phi_prime) || phi.target != phi_prime.target {
        return Err(AtlasError::IncompatibleChanges);
    }
    let mut found: Option<UnitaryMatrix> = None;
    for g in group_j.elements() {
        if g.mul(&phi.linear) == phi_prime.linear && g.apply(&phi.offset) == phi_prime.offset {
            if found.is_some() {
                return Err(AtlasError::MultipleWitnesses);
            }
            found = Some(g.clone());
        }
    }
    Ok(found)
}

/// Deterministic Gaussian-rational sample points strictly inside a ball.
///
/// Points are `center + s·v` where `v` runs over the lattice `{-2..2}^{2n}`
/// (real and imaginary parts) and `s = radius / (4n)`, so every sample lies
/// within `radius/√(2n)` of the center.
pub fn ball_sample_grid(center: &[Cyclotomic], radius: &Rational, count: usize) -> Vec<CycloVector> {
    let n = center.len();
    let real_dim = 2 * n as u32;
    let total = 5usize.saturating_pow(real_dim);
    let step = radius / rational::int(4 * n as i64);
    let i = Cyclotomic::root_of_unity(4, 1);
    // stride coprime to 5 visits the whole lattice before repeating
    let stride = 7usize;
    (0..count.min(total))
        .map(|k| {
            let mut code = (k * stride) % total;
            let mut offset = Vec::with_capacity(n);
            for _ in 0..n {
                let re = (code % 5) as i64 - 2;
                code /= 5;
                let im = (code % 5) as i64 - 2;
                code /= 5;
                let value = &Cyclotomic::from_rational(&step * rational::int(re))
                    + &i.scale(&(&step * rational::int(im)));
                offset.push(value);
            }
            add_vectors(center, &offset)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationEntry {
    pub id: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    fn push(&mut self, id: String, passed: bool, witness: Option<String>) {
        self.entries.push(ValidationEntry { id, passed, witness });
    }

    pub fn entry(&self, id: &str) -> Option<&ValidationEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Structural checks of an atlas: chart groups, unitarity and domain
/// containment of every change of charts, and the Remark-2 witness for
/// every pair of changes sharing a source domain and target.
pub fn validate_atlas(atlas: &OrbifoldAtlas, samples: usize) -> ValidationReport {
    let mut report = ValidationReport::default();
    for chart in atlas.charts() {
        let ok = chart.group.dim() == atlas.dim() && chart.group.identity().is_identity();
        report.push(format!("atlas.chart.{}", chart.id), ok, None);
    }
    for &(i, j) in atlas.overlaps() {
        let covered = atlas.changes().iter().any(|c| c.source == i && c.target == j);
        report.push(format!("atlas.overlap.{i}.{j}"), covered, None);
    }
    for (idx, change) in atlas.changes().iter().enumerate() {
        let tag = format!("{}.c{idx}", change.label());
        report.push(format!("atlas.unitary.{tag}"), verify_unitary(&change.linear), None);

        let (Some(src), Some(dst)) = (atlas.chart(change.source), atlas.chart(change.target)) else {
            report.push(format!("atlas.domain.{tag}"), false, Some("unknown chart".into()));
            continue;
        };
        let (ok, witness) = domain_containment(change, &src.radius, &dst.radius, samples);
        report.push(format!("atlas.domain.{tag}"), ok, witness);
    }
    let changes = atlas.changes();
    for a in 0..changes.len() {
        for b in (a + 1)..changes.len() {
            let (phi, psi) = (&changes[a], &changes[b]);
            if !phi.same_source_domain(psi) || phi.target != psi.target {
                continue;
            }
            let id = format!("atlas.witness.{}.c{a}.c{b}", phi.label());
            let Some(target) = atlas.chart(phi.target) else { continue };
            match equivalent_changes(phi, psi, &target.group) {
                Ok(Some(g)) => report.push(id, true, Some(g.to_string())),
                Ok(None) => report.push(id, false, Some("no witness in target group".into())),
                Err(e) => report.push(id, false, Some(e.to_string())),
            }
        }
    }
    report
}

fn domain_containment(
    change: &ChangeOfChart,
    source_radius: &Radius,
    target_radius: &Radius,
    samples: usize,
) -> (bool, Option<String>) {
    // W_i ⊂ U_i ⇔ |c| + ρ ≤ r_i ⇔ r_i ≥ ρ and |c|² ≤ (r_i − ρ)²
    let ball_inside = |center: &[Cyclotomic], radius: &Radius| -> Option<bool> {
        match radius {
            Radius::Infinite => Some(true),
            Radius::Finite(r) => {
                if r < &change.radius {
                    return Some(false);
                }
                let slack = r - &change.radius;
                let diff = &Cyclotomic::from_rational(&slack * &slack) - &norm_squared(center);
                diff.real_sign().map(|s| s != Ordering::Less)
            }
        }
    };
    match ball_inside(&change.center, source_radius) {
        Some(true) => {}
        Some(false) => return (false, Some("source ball leaves the source chart".into())),
        None => return (false, Some("source containment undecided".into())),
    }
    let image_center = change.apply(&change.center);
    match ball_inside(&image_center, target_radius) {
        Some(true) => {}
        Some(false) => {
            return (false, Some(format!("image ball at {} leaves the target chart", format_vector(&image_center))))
        }
        None => return (false, Some("target containment undecided".into())),
    }
    for p in ball_sample_grid(&change.center, &change.radius, samples) {
        if target_radius.contains(&change.apply(&p)) != Some(true) {
            return (false, Some(format!("sample {} maps outside", format_vector(&p))));
        }
    }
    (true, None)
}
