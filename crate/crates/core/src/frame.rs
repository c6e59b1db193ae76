//! Unitary frame bundles over flat charts, the lifted chart-group and
//! change-of-chart actions, and the Seifert gluing maps between Γ-classes of
//! frames.
//!
//! A frame at `x` is a unitary matrix whose columns are the frame vectors.
//! Chart maps are unitary-affine, so their derivative is the linear part and
//! lifts act on frames by left multiplication.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atlas::{
    ball_sample_grid, format_vector, stabilizer, ChangeOfChart, CycloMatrix, CycloVector, FiniteMatrixGroup,
    OrbifoldAtlas, Radius, UnitaryMatrix,
};
use crate::cyclotomic::Cyclotomic;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("group contains two equal elements {0}")]
    NonFaithfulGroup(String),
    #[error("basepoint {0} lies outside the change's source domain")]
    BasepointOutsideDomain(String),
    #[error("no declared change of charts covers the class at {0}")]
    NoApplicableChange(String),
    #[error("frame lives on chart {found}, expected chart {expected}")]
    WrongChart { expected: usize, found: usize },
    #[error("{0} is not an element of the chart group")]
    NotInGroup(String),
    #[error("chart {0} is not part of the atlas")]
    UnknownChart(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitaryFrame {
    pub chart: usize,
    pub base: CycloVector,
    pub frame: UnitaryMatrix,
}

impl UnitaryFrame {
    pub fn new(chart: usize, base: CycloVector, frame: UnitaryMatrix) -> Self {
        Self { chart, base, frame }
    }

    pub fn describe(&self) -> String {
        format!("({}, {})", format_vector(&self.base), self.frame)
    }
}

/// `(x, ξ) ↦ (g·x, g·ξ)`.
pub fn lift_group_action(g: &UnitaryMatrix, frame: &UnitaryFrame) -> UnitaryFrame {
    UnitaryFrame { chart: frame.chart, base: g.apply(&frame.base), frame: g.compose(&frame.frame) }
}

/// `(x, ξ) ↦ (x, ξA)`.
pub fn right_action(frame: &UnitaryFrame, a: &UnitaryMatrix) -> UnitaryFrame {
    UnitaryFrame { chart: frame.chart, base: frame.base.clone(), frame: frame.frame.compose(a) }
}

/// `g(ξA) = (gξ)A`, decided exactly.
pub fn check_equivariance(g: &UnitaryMatrix, a: &UnitaryMatrix, frame: &UnitaryFrame) -> bool {
    lift_group_action(g, &right_action(frame, a)) == right_action(&lift_group_action(g, frame), a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessVerdict {
    pub passed: bool,
    pub witness: String,
}

/// No non-identity element fixes a sampled frame.
///
/// Alongside the sampled comparison each frame is checked to be invertible
/// (`ξξ* = I`), which is what turns `gξ = ξ` into `g = gξξ* = I`.
pub fn check_lifted_action_free(
    group: &FiniteMatrixGroup,
    frames: &[UnitaryFrame],
) -> Result<FreenessVerdict, FrameError> {
    let elements = group.elements();
    for (i, g) in elements.iter().enumerate() {
        if elements[..i].contains(g) {
            return Err(FrameError::NonFaithfulGroup(g.to_string()));
        }
    }
    for frame in frames {
        let xi = frame.frame.matrix();
        if !xi.mul(&xi.conj_transpose()).is_identity() {
            return Ok(FreenessVerdict { passed: false, witness: format!("frame {} not invertible", frame.describe()) });
        }
        for g in group.nontrivial() {
            if lift_group_action(g, frame) == *frame {
                return Ok(FreenessVerdict {
                    passed: false,
                    witness: format!("{g} fixes {}", frame.describe()),
                });
            }
        }
    }
    Ok(FreenessVerdict {
        passed: true,
        witness: format!("order {} faithful, g*xi = xi forces g = I", group.order()),
    })
}

/// The lift `(x, ξ) ↦ (Ux + b, Uξ)` of a unitary-affine map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedMap {
    pub linear: CycloMatrix,
    pub offset: CycloVector,
}

impl LiftedMap {
    pub fn from_group_element(g: &UnitaryMatrix) -> Self {
        Self { linear: g.matrix().clone(), offset: vec![Cyclotomic::zero(); g.dim()] }
    }

    pub fn from_change(phi: &ChangeOfChart) -> Self {
        Self { linear: phi.linear.clone(), offset: phi.offset.clone() }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self {
            linear: self.linear.mul(&inner.linear),
            offset: crate::atlas::add_vectors(&self.linear.apply(&inner.offset), &self.offset),
        }
    }

    /// Applies the map; the frame part only sees the linear part.
    pub fn apply(&self, base: &[Cyclotomic], frame: &CycloMatrix) -> (CycloVector, CycloMatrix) {
        (crate::atlas::add_vectors(&self.linear.apply(base), &self.offset), self.linear.mul(frame))
    }
}

pub fn lift_change_of_chart(phi: &ChangeOfChart, frame: &UnitaryFrame) -> Result<UnitaryFrame, FrameError> {
    if frame.chart != phi.source {
        return Err(FrameError::WrongChart { expected: phi.source, found: frame.chart });
    }
    if phi.source_contains(&frame.base) != Some(true) {
        return Err(FrameError::BasepointOutsideDomain(format_vector(&frame.base)));
    }
    let frame_part = phi.linear.mul(frame.frame.matrix());
    Ok(UnitaryFrame {
        chart: phi.target,
        base: phi.apply(&frame.base),
        frame: UnitaryMatrix::new(frame_part).map_err(|_| FrameError::NotInGroup(phi.linear.to_string()))?,
    })
}

/// A point of `Γ\(U × U(n))`, stored as a representative frame.
#[derive(Clone, Debug)]
pub struct FrameClass {
    pub rep: UnitaryFrame,
    pub group: FiniteMatrixGroup,
}

impl FrameClass {
    pub fn new(rep: UnitaryFrame, group: FiniteMatrixGroup) -> Self {
        Self { rep, group }
    }

    pub fn chart(&self) -> usize {
        self.rep.chart
    }

    /// The group element carrying this representative to `frame`, if any.
    pub fn witness_for(&self, frame: &UnitaryFrame) -> Option<UnitaryMatrix> {
        if frame.chart != self.rep.chart {
            return None;
        }
        self.group.elements().iter().find(|g| lift_group_action(g, &self.rep) == *frame).cloned()
    }

    pub fn same_class(&self, other: &FrameClass) -> bool {
        self.witness_for(&other.rep).is_some()
    }
}

/// Gluing data `f̃_ji` for an ordered chart pair.
#[derive(Clone, Debug)]
pub struct SeifertGluing {
    pub source: usize,
    pub target: usize,
    pub source_group: FiniteMatrixGroup,
    pub target_group: FiniteMatrixGroup,
    pub changes: Vec<ChangeOfChart>,
}

impl SeifertGluing {
    pub fn from_atlas(atlas: &OrbifoldAtlas, source: usize, target: usize) -> Result<Self, FrameError> {
        let src = atlas.chart(source).ok_or(FrameError::UnknownChart(source))?;
        let dst = atlas.chart(target).ok_or(FrameError::UnknownChart(target))?;
        Ok(Self {
            source,
            target,
            source_group: src.group.clone(),
            target_group: dst.group.clone(),
            changes: atlas.changes_between(source, target),
        })
    }

    /// `i = j` with the identity change on the whole chart.
    pub fn identity(chart: usize, group: FiniteMatrixGroup, center: CycloVector, radius: crate::rational::Rational) -> Self {
        let n = group.dim();
        let change = ChangeOfChart::new(
            chart,
            chart,
            CycloMatrix::identity(n),
            vec![Cyclotomic::zero(); n],
            center,
            radius,
        )
        .expect("identity change is well formed");
        Self { source: chart, target: chart, source_group: group.clone(), target_group: group, changes: vec![change] }
    }

    /// All `(g, φ)` with `g·x` in the source domain of `φ`.
    pub fn applicable_choices(&self, cls: &FrameClass) -> Vec<(UnitaryMatrix, usize)> {
        let mut out = Vec::new();
        for g in self.source_group.elements() {
            let moved = g.apply(&cls.rep.base);
            for (idx, phi) in self.changes.iter().enumerate() {
                if phi.source_contains(&moved) == Some(true) {
                    out.push((g.clone(), idx));
                }
            }
        }
        out
    }
}

/// `f̃_ji(cls) = q̃_j φ̃(g·rep)` for the chosen `(g, φ)`.
pub fn gluing_apply(
    gluing: &SeifertGluing,
    cls: &FrameClass,
    choice: (&UnitaryMatrix, &ChangeOfChart),
) -> Result<FrameClass, FrameError> {
    let (g, phi) = choice;
    if cls.chart() != gluing.source {
        return Err(FrameError::WrongChart { expected: gluing.source, found: cls.chart() });
    }
    if !gluing.source_group.contains(g.matrix()) {
        return Err(FrameError::NotInGroup(g.to_string()));
    }
    let moved = lift_group_action(g, &cls.rep);
    let image = lift_change_of_chart(phi, &moved)?;
    Ok(FrameClass::new(image, gluing.target_group.clone()))
}

/// Applies the gluing with the first applicable choice.
pub fn gluing_apply_any(gluing: &SeifertGluing, cls: &FrameClass) -> Result<FrameClass, FrameError> {
    let choices = gluing.applicable_choices(cls);
    let (g, idx) = choices.first().ok_or_else(|| FrameError::NoApplicableChange(format_vector(&cls.rep.base)))?;
    gluing_apply(gluing, cls, (g, &gluing.changes[*idx]))
}

#[derive(Clone, Debug)]
pub struct WellDefinedVerdict {
    pub passed: bool,
    pub choices: usize,
    /// Target-group elements identifying each output with the first one.
    pub witnesses: Vec<UnitaryMatrix>,
    pub counterexample: Option<String>,
}

/// Compares the outputs of every applicable `(g, φ)` as Γ_j-classes.
pub fn gluing_well_defined(gluing: &SeifertGluing, cls: &FrameClass) -> Result<WellDefinedVerdict, FrameError> {
    let choices = gluing.applicable_choices(cls);
    let mut outputs = Vec::with_capacity(choices.len());
    for (g, idx) in &choices {
        outputs.push(gluing_apply(gluing, cls, (g, &gluing.changes[*idx]))?);
    }
    let mut verdict = WellDefinedVerdict { passed: true, choices: choices.len(), witnesses: Vec::new(), counterexample: None };
    let Some(first) = outputs.first() else {
        return Ok(verdict);
    };
    for (k, out) in outputs.iter().enumerate().skip(1) {
        match first.witness_for(&out.rep) {
            Some(h) => verdict.witnesses.push(h),
            None => {
                verdict.passed = false;
                let (g, idx) = &choices[k];
                verdict.counterexample = Some(format!(
                    "choice ({}, change {}) gives {} not in class of {}",
                    g,
                    idx,
                    out.rep.describe(),
                    first.rep.describe()
                ));
                break;
            }
        }
    }
    Ok(verdict)
}

/// Outcome of comparing `f̃_ki` with `f̃_kj ∘ f̃_ji` on sampled classes.
#[derive(Clone, Debug)]
pub struct CocycleVerdict {
    pub passed: bool,
    pub compared: usize,
    pub counterexample: Option<String>,
}

pub fn cocycle_check(
    ij: &SeifertGluing,
    jk: &SeifertGluing,
    ik: &SeifertGluing,
    classes: &[FrameClass],
) -> CocycleVerdict {
    let mut verdict = CocycleVerdict { passed: true, compared: 0, counterexample: None };
    for cls in classes {
        let Ok(direct) = gluing_apply_any(ik, cls) else { continue };
        let Ok(mid) = gluing_apply_any(ij, cls) else { continue };
        let Ok(composed) = gluing_apply_any(jk, &mid) else { continue };
        verdict.compared += 1;
        if !direct.same_class(&composed) {
            verdict.passed = false;
            verdict.counterexample = Some(format!(
                "class {}: direct {} vs composed {}",
                cls.rep.describe(),
                direct.rep.describe(),
                composed.rep.describe()
            ));
            break;
        }
    }
    verdict
}

/// `f̃_ij ∘ f̃_ji` returns each sampled class to itself.
pub fn inverse_consistency(ji: &SeifertGluing, ij: &SeifertGluing, classes: &[FrameClass]) -> CocycleVerdict {
    let mut verdict = CocycleVerdict { passed: true, compared: 0, counterexample: None };
    for cls in classes {
        let Ok(there) = gluing_apply_any(ji, cls) else { continue };
        let Ok(back) = gluing_apply_any(ij, &there) else { continue };
        verdict.compared += 1;
        if !cls.same_class(&back) {
            verdict.passed = false;
            verdict.counterexample = Some(format!("{} returns as {}", cls.rep.describe(), back.rep.describe()));
            break;
        }
    }
    verdict
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDescriptor {
    pub stabilizer_order: usize,
    pub descriptor: String,
}

pub fn seifert_fiber_report(atlas: &OrbifoldAtlas, chart: usize, point: &[Cyclotomic]) -> Result<FiberDescriptor, FrameError> {
    let c = atlas.chart(chart).ok_or(FrameError::UnknownChart(chart))?;
    let s = stabilizer(&c.group, point).order();
    let descriptor = if s == 1 {
        format!("fiber = U({}) (principal)", c.n)
    } else {
        format!("fiber = Gamma_x\\U({}) with |Gamma_x| = {s}", c.n)
    };
    Ok(FiberDescriptor { stabilizer_order: s, descriptor })
}

/// Cyclotomic order used for random frames on a chart of order `n`.
pub fn frame_order(chart_order: u32) -> u32 {
    num_integer::lcm(chart_order.max(1), 8)
}

/// Deterministic random frames at the given basepoints.
pub fn sample_frames(chart: usize, n: usize, order: u32, points: &[CycloVector], seed: u64) -> Vec<UnitaryFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    points
        .iter()
        .map(|p| UnitaryFrame::new(chart, p.clone(), UnitaryMatrix::random(n, order, &mut rng)))
        .collect()
}

/// One line of the Seifert suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertCheck {
    pub id: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SeifertOptions {
    pub samples: usize,
    pub frames: usize,
    pub seed: u64,
}

impl Default for SeifertOptions {
    fn default() -> Self {
        Self { samples: 25, frames: 10, seed: 0x5e1f }
    }
}

fn classes_for(gluing: &SeifertGluing, order: u32, opts: &SeifertOptions, salt: u64) -> Vec<FrameClass> {
    let mut points: Vec<CycloVector> = Vec::new();
    for phi in &gluing.changes {
        for p in ball_sample_grid(&phi.center, &phi.radius, opts.samples) {
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }
    let n = gluing.source_group.dim();
    sample_frames(gluing.source, n, order, &points, opts.seed ^ salt)
        .into_iter()
        .map(|f| FrameClass::new(f, gluing.source_group.clone()))
        .collect()
}

/// Freeness and equivariance per chart, well-definedness per overlap,
/// cocycle identity per triple and inverse consistency per reversed pair.
/// Entries are sorted by chart ids.
pub fn run_seifert_suite(atlas: &OrbifoldAtlas, opts: &SeifertOptions) -> Vec<SeifertCheck> {
    let mut out = Vec::new();
    let mut chart_ids: Vec<usize> = atlas.charts().iter().map(|c| c.id).collect();
    chart_ids.sort_unstable();

    for &id in &chart_ids {
        let chart = atlas.chart(id).expect("listed chart");
        let order = frame_order(chart.cyclotomic_order);
        let zero = vec![Cyclotomic::zero(); chart.n];
        let mut points = vec![zero];
        if let Some(phi) = atlas.changes().iter().find(|c| c.source == id) {
            points.extend(ball_sample_grid(&phi.center, &phi.radius, opts.frames.saturating_sub(1)));
        } else {
            // no outgoing change: sample around the origin instead
            let r = match &chart.radius {
                Radius::Finite(r) => r / crate::rational::int(2),
                Radius::Infinite => crate::rational::frac(1, 2),
            };
            points.extend(ball_sample_grid(&points[0].clone(), &r, opts.frames.saturating_sub(1)));
        }
        points.truncate(opts.frames.max(1));
        let frames = sample_frames(id, chart.n, order, &points, opts.seed ^ id as u64);

        let free = check_lifted_action_free(&chart.group, &frames);
        out.push(match free {
            Ok(v) => SeifertCheck { id: format!("seifert.free.{id}"), passed: v.passed, witness: Some(v.witness) },
            Err(e) => SeifertCheck { id: format!("seifert.free.{id}"), passed: false, witness: Some(e.to_string()) },
        });

        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(1000 + id as u64));
        let mut eq_fail = None;
        let mut count = 0;
        for frame in &frames {
            let a = UnitaryMatrix::random(chart.n, order, &mut rng);
            for g in chart.group.elements() {
                count += 1;
                if !check_equivariance(g, &a, frame) {
                    eq_fail = Some(format!("g={g} A={a}"));
                }
            }
        }
        out.push(SeifertCheck {
            id: format!("seifert.equivariance.{id}"),
            passed: eq_fail.is_none(),
            witness: Some(eq_fail.unwrap_or_else(|| format!("{count} exact comparisons"))),
        });
    }

    let pairs = atlas.overlaps().to_vec();
    let mut sorted_pairs = pairs.clone();
    sorted_pairs.sort_unstable();
    for &(i, j) in &sorted_pairs {
        let Ok(gluing) = SeifertGluing::from_atlas(atlas, i, j) else { continue };
        let order = frame_order(atlas.chart(i).map_or(1, |c| c.cyclotomic_order));
        let classes = classes_for(&gluing, order, opts, (i * 97 + j) as u64);
        let mut failure = None;
        let mut witnesses: Vec<String> = Vec::new();
        let mut applicable = 0;
        for cls in &classes {
            match gluing_well_defined(&gluing, cls) {
                Ok(v) => {
                    if v.choices > 0 {
                        applicable += 1;
                    }
                    for w in v.witnesses {
                        let s = w.to_string();
                        if !w.is_identity() && !witnesses.contains(&s) {
                            witnesses.push(s);
                        }
                    }
                    if !v.passed {
                        failure = v.counterexample;
                        break;
                    }
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break;
                }
            }
        }
        let witness = match &failure {
            Some(c) => c.clone(),
            None if witnesses.is_empty() => format!("{applicable} classes, no redundant choices"),
            None => witnesses.join(";"),
        };
        out.push(SeifertCheck {
            id: format!("seifert.well_defined.{i}.{j}"),
            passed: failure.is_none() && applicable > 0,
            witness: Some(witness),
        });

        if i < j && pairs.contains(&(j, i)) {
            if let Ok(back) = SeifertGluing::from_atlas(atlas, j, i) {
                let v = inverse_consistency(&gluing, &back, &classes);
                out.push(SeifertCheck {
                    id: format!("seifert.inverse.{i}.{j}"),
                    passed: v.passed && v.compared > 0,
                    witness: Some(v.counterexample.unwrap_or_else(|| format!("{} classes", v.compared))),
                });
            }
        }
    }

    for &i in &chart_ids {
        for &j in &chart_ids {
            for &k in &chart_ids {
                if i == j || j == k || i == k {
                    continue;
                }
                if !(pairs.contains(&(i, j)) && pairs.contains(&(j, k)) && pairs.contains(&(i, k))) {
                    continue;
                }
                let (Ok(ij), Ok(jk), Ok(ik)) = (
                    SeifertGluing::from_atlas(atlas, i, j),
                    SeifertGluing::from_atlas(atlas, j, k),
                    SeifertGluing::from_atlas(atlas, i, k),
                ) else {
                    continue;
                };
                let order = frame_order(atlas.chart(i).map_or(1, |c| c.cyclotomic_order));
                let classes = classes_for(&ik, order, opts, (i * 9973 + j * 97 + k) as u64);
                let v = cocycle_check(&ij, &jk, &ik, &classes);
                if v.compared == 0 {
                    continue;
                }
                out.push(SeifertCheck {
                    id: format!("seifert.cocycle.{i}.{j}.{k}"),
                    passed: v.passed,
                    witness: Some(v.counterexample.unwrap_or_else(|| format!("{} classes", v.compared))),
                });
            }
        }
    }

    for &id in &chart_ids {
        let chart = atlas.chart(id).expect("listed chart");
        if let Ok(fiber) = seifert_fiber_report(atlas, id, &vec![Cyclotomic::zero(); chart.n]) {
            out.push(SeifertCheck {
                id: format!("seifert.fiber.{id}"),
                passed: true,
                witness: Some(format!("s={}", fiber.stabilizer_order)),
            });
        }
    }
    out
}
