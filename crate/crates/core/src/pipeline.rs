//! Runs the requested checks of a scenario in a fixed order: atlas, Seifert,
//! taut, transverse, then cohomology with Lefschetz and duality.

use std::sync::Arc;

use num_traits::Zero;

use crate::atlas::{group_closure, validate_atlas, ChangeOfChart, Chart, FiniteMatrixGroup, OrbifoldAtlas};
use crate::cohomology::action::compose;
use crate::cohomology::lefschetz::{kahler_from_cocycle, product_kahler_class};
use crate::cohomology::{
    invariant::projector_is_idempotent, invariant_cohomology, kahler_class, lefschetz_verify, poincare_duality_verify,
    product_complex, quotient_fundamental_cycle, verify_action, CohomologyData, CohomologyError, KahlerClassRep,
    ProductComplex, SimplicialComplex, SimplicialGroupAction,
};
use crate::foliation::{
    average_metric, basic_fixtures, product_chart_grid, product_chart_vertical, run_taut_suite, standard_j, tk_fixture,
    transverse_kahler_check, FiniteLinearGroup, MetricField, Quadrature, TautConfig, TorusAction,
};
use crate::frame::run_seifert_suite;
use crate::linalg;
use crate::rational::{int, Rational};
use crate::report::Report;
use crate::scenario::{
    AtlasSpec, ComplexSource, GeometryAction, GroupKind, GroupSpec, MetricKind, Pipeline, Scenario,
};

/// Upper bound on generated group orders.
const GROUP_CAP: usize = 4096;

/// Command-line overrides applied on top of the scenario.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, scenario: &mut Scenario) {
        if let Some(t) = self.tol {
            scenario.taut.tol = t;
        }
        if let Some(s) = self.samples {
            scenario.taut.samples = s;
            scenario.seifert.samples = s;
            if let Some(a) = scenario.atlas.as_mut() {
                a.samples = s;
            }
        }
    }
}

fn fmt_dev(x: f64) -> String {
    format!("max_dev={x:.3e}")
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn build_atlas(spec: &AtlasSpec) -> Result<OrbifoldAtlas, String> {
    let mut charts = Vec::new();
    for c in &spec.charts {
        let group = if c.generators.is_empty() {
            FiniteMatrixGroup::trivial(c.n)
        } else {
            if c.generators.iter().any(|g| g.rows() != c.n) {
                return Err(format!("chart {}: generators must be {}x{}", c.id, c.n, c.n));
            }
            group_closure(&c.generators, GROUP_CAP).map_err(|e| format!("chart {}: {e}", c.id))?
        };
        charts.push(Chart::new(c.id, c.radius.clone(), c.order, group));
    }
    let changes = spec
        .changes
        .iter()
        .map(|c| {
            ChangeOfChart::new(c.source, c.target, c.linear.clone(), c.offset.clone(), c.center.clone(), c.radius.clone())
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    OrbifoldAtlas::new(charts, changes, spec.overlaps.clone()).map_err(|e| e.to_string())
}

fn run_atlas(s: &Scenario, report: &mut Report) {
    let Some(spec) = &s.atlas else { return };
    let atlas = match build_atlas(spec) {
        Ok(a) => a,
        Err(e) => {
            report.check("atlas.build", false, Some(e));
            return;
        }
    };
    if s.wants(Pipeline::Atlas) {
        for e in validate_atlas(&atlas, spec.samples).entries {
            report.check(e.id, e.passed, e.witness.map(|w| format!("witness={w}")));
        }
    }
    if s.wants(Pipeline::Seifert) {
        for c in run_seifert_suite(&atlas, &s.seifert) {
            report.check(c.id, c.passed, c.witness.map(|w| format!("witness={w}")));
        }
    }
}

fn metric_field(kind: &MetricKind, d: usize) -> Result<MetricField, String> {
    match kind {
        MetricKind::Round | MetricKind::Flat => Ok(MetricField::flat(d)),
        MetricKind::Custom(entries) => MetricField::polynomial(entries.clone()).map_err(|e| e.to_string()),
    }
}

/// Rational points `{−1, 0, 1/2, 1}^d`, thinned to at most 256.
fn rational_grid(d: usize) -> Vec<Vec<Rational>> {
    let values = [int(-1), int(0), Rational::new(1.into(), 2.into()), int(1)];
    let total = 4usize.pow(d as u32);
    let stride = total.div_ceil(256).max(1);
    (0..total)
        .step_by(stride)
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let v = values[i % 4].clone();
                    i /= 4;
                    v
                })
                .collect()
        })
        .collect()
}

fn finite_average_check(group: &FiniteLinearGroup, metric: &MetricField) -> Result<bool, String> {
    let avg = average_metric(metric, &Quadrature::Finite(group.clone())).map_err(|e| e.to_string())?;
    for p in rational_grid(group.dim()) {
        let base = avg.eval_exact(&p).ok_or("metric is not exactly evaluable")?;
        for a in &group.elements {
            let moved = linalg::mul_vec(a, &p);
            let at = avg.eval_exact(&moved).ok_or("metric is not exactly evaluable")?;
            let pulled = linalg::mul(&linalg::mul(&linalg::transpose(a), &at), a);
            if pulled != base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn run_taut(s: &Scenario, report: &mut Report) {
    let (Some(action), Some(metric)) = (&s.action, &s.metric) else { return };
    let field = match metric_field(&metric.kind, action.real_dim()) {
        Ok(f) => f,
        Err(e) => {
            report.check("taut.metric", false, Some(e));
            return;
        }
    };
    match action {
        GeometryAction::Torus(weights) => {
            let torus = match TorusAction::new(weights.clone()) {
                Ok(t) => t,
                Err(e) => {
                    report.check("taut.action", false, Some(e.to_string()));
                    return;
                }
            };
            let mut cfg = TautConfig::new(torus, field);
            cfg.average = metric.average;
            cfg.samples = s.taut.samples;
            cfg.tol = s.taut.tol;
            cfg.orbits = s.taut.orbits;
            cfg.nodes = s.taut.nodes;
            cfg.seed = s.taut.seed;
            match run_taut_suite(&cfg) {
                Ok(r) => {
                    report.check("taut.detM1", r.det_m1.passed, Some(fmt_dev(r.det_m1.max_dev)));
                    report.check("taut.orbit_volume", r.orbit_volume.passed, Some(fmt_dev(r.orbit_volume.max_dev)));
                    report.check("taut.invariance", r.invariance.passed, Some(fmt_dev(r.invariance.max_dev)));
                    report.check("taut.split", r.split.passed, Some(fmt_dev(r.split.max_dev)));
                }
                Err(e) => report.check("taut.error", false, Some(e.to_string())),
            }
        }
        GeometryAction::Finite(elements) => {
            let verdict = FiniteLinearGroup::new(elements.clone())
                .map_err(|e| e.to_string())
                .and_then(|g| finite_average_check(&g, &field));
            match verdict {
                Ok(ok) => report.check("taut.finite_average", ok, None),
                Err(e) => report.check("taut.finite_average", false, Some(e)),
            }
        }
    }
}

fn run_transverse(s: &Scenario, report: &mut Report) {
    let t = &s.transverse;
    let Some(omega) = tk_fixture(&t.form) else {
        report.check("tk.form", false, Some(format!("unknown form {}", t.form)));
        return;
    };
    let points = product_chart_grid(t.grid.max(1), 0.4);
    match transverse_kahler_check(&omega, &standard_j(1, 1), &product_chart_vertical(), &points) {
        Ok(v) => {
            report.check("tk.closed", v.closed, None);
            report.check("tk.kernel", v.kernel, None);
            report.check("tk.positive", v.positive, Some(format!("min_eig={:.6}", v.min_eigenvalue)));
        }
        Err(e) => report.check("tk.error", false, Some(e.to_string())),
    }
    let fixtures = basic_fixtures();
    for name in &t.basic {
        if let Some((_, alpha, _)) = fixtures.iter().find(|(n, _, _)| n == name) {
            report.check(format!("basic.{name}"), basic_check(alpha), None);
        }
    }
}

fn basic_check(alpha: &crate::foliation::PolyForm) -> bool {
    crate::foliation::basic_form_check(alpha, &product_chart_vertical()).passed()
}

/// The complex of a spec, with its product structure when it is a product.
pub fn build_complex(s: &Scenario, id: &str) -> Result<(SimplicialComplex, Option<ProductComplex>), String> {
    let spec = s.complex(id).ok_or_else(|| format!("unknown complex '{id}'"))?;
    match &spec.source {
        ComplexSource::Facets { vertices, facets } => {
            SimplicialComplex::build(Some(*vertices), facets).map(|c| (c, None)).map_err(|e| e.to_string())
        }
        ComplexSource::Product(a, b) => {
            let (left, _) = build_complex(s, a)?;
            let (right, _) = build_complex(s, b)?;
            let p = product_complex(&left, &right).map_err(|e| e.to_string())?;
            Ok((p.complex.clone(), Some(p)))
        }
    }
}

fn permutation_order(p: &[usize]) -> usize {
    let id: Vec<usize> = (0..p.len()).collect();
    let mut cur = p.to_vec();
    let mut k = 1;
    while cur != id {
        cur = compose(p, &cur);
        k += 1;
    }
    k
}

pub fn build_action(spec: &GroupSpec, vertices: usize) -> Result<SimplicialGroupAction, String> {
    let err = |e: CohomologyError| e.to_string();
    match &spec.kind {
        GroupKind::Cyclic(k) => {
            let a = SimplicialGroupAction::generated(vertices, &spec.maps, GROUP_CAP).map_err(err)?;
            if a.order() != *k {
                return Err(format!("generator has order {}, declared cyclic:{k}", a.order()));
            }
            Ok(a)
        }
        GroupKind::Product(ks) => {
            let a = SimplicialGroupAction::generated(vertices, &spec.maps, GROUP_CAP).map_err(err)?;
            for (g, k) in spec.maps.iter().zip(ks) {
                if permutation_order(g) != *k {
                    return Err(format!("a generator has order {}, declared {k}", permutation_order(g)));
                }
            }
            for g in &spec.maps {
                for h in &spec.maps {
                    if compose(g, h) != compose(h, g) {
                        return Err("generators of a product group must commute".into());
                    }
                }
            }
            let expected: usize = ks.iter().product();
            if a.order() != expected {
                return Err(format!("generated group has order {}, declared {expected}", a.order()));
            }
            Ok(a)
        }
        GroupKind::Table(table) => {
            let n = spec.maps.len();
            if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
                return Err(format!("table must be {n}x{n} with entries below {n}"));
            }
            for a in 0..n {
                for b in 0..n {
                    if compose(&spec.maps[a], &spec.maps[b]) != spec.maps[table[a][b]] {
                        return Err(format!("maps {a} and {b} do not compose as the table says"));
                    }
                }
            }
            let act = SimplicialGroupAction::from_elements(spec.maps.clone()).map_err(err)?;
            if act.order() != n || act.vertex_count() != vertices {
                return Err("table elements must be distinct permutations of the complex's vertices".into());
            }
            Ok(act)
        }
    }
}

fn explicit_cocycle(complex: &SimplicialComplex, terms: &[(Vec<usize>, Rational)]) -> Result<Vec<Rational>, String> {
    let mut c = vec![Rational::zero(); complex.count(2)];
    for (simplex, value) in terms {
        let mut s = simplex.clone();
        s.sort_unstable();
        if s.len() != 3 {
            return Err(format!("{simplex:?} is not a triangle"));
        }
        let i = complex.index_of(&s).ok_or_else(|| format!("{simplex:?} is not a simplex of the complex"))?;
        c[i] += value;
    }
    Ok(c)
}

fn run_cohomology(s: &Scenario, report: &mut Report) {
    let Some(q) = &s.quotient else { return };
    let (complex, product) = match build_complex(s, &q.complex) {
        Ok(c) => c,
        Err(e) => {
            report.check("complex.build", false, Some(e));
            return;
        }
    };
    let group = s.group(&q.action).expect("validated action id");
    let action = match build_action(group, complex.vertex_count()) {
        Ok(a) => a,
        Err(e) => {
            report.check(format!("action.{}", group.id), false, Some(e));
            return;
        }
    };
    let verdict = verify_action(&complex, &action);
    let ok = verdict.homomorphism && verdict.simplicial;
    report.check(format!("action.{}", group.id), ok, verdict.witness.map(|w| format!("witness={w}")));
    if !ok {
        return;
    }
    let complex = Arc::new(complex);
    let data = match CohomologyData::compute(Arc::clone(&complex)) {
        Ok(d) => d,
        Err(e) => {
            report.check("cohomology.error", false, Some(e.to_string()));
            return;
        }
    };
    let inv = match invariant_cohomology(&data, &action) {
        Ok(i) => i,
        Err(e) => {
            report.check("cohomology.error", false, Some(e.to_string()));
            return;
        }
    };
    if s.wants(Pipeline::Cohomology) {
        report.info("betti", join(&data.betti()));
        report.info("betti.inv", join(&inv.betti()));
        report.check("projector", inv.degrees.iter().all(|d| projector_is_idempotent(&d.projector)), None);
    }
    if !(s.wants(Pipeline::Hlt) || s.wants(Pipeline::Pd)) {
        return;
    }
    let n = q.n;
    if 2 * n != complex.dim() {
        report.check("quotient.dim", false, Some(format!("complex has dimension {}, expected {}", complex.dim(), 2 * n)));
        return;
    }
    let cycle = match quotient_fundamental_cycle(&complex, &action) {
        Ok(c) => {
            report.check("fundamental_cycle", true, None);
            c
        }
        Err(CohomologyError::NonOrientable) => {
            report.check("fundamental_cycle", false, Some("NonOrientable".into()));
            return;
        }
        Err(e) => {
            report.check("fundamental_cycle", false, Some(e.to_string()));
            return;
        }
    };
    if s.wants(Pipeline::Hlt) {
        let kahler: Result<KahlerClassRep, String> = if let Some(terms) = &s.kahler {
            explicit_cocycle(&complex, terms)
                .and_then(|c| kahler_from_cocycle(&data, &inv, c, n, &cycle).map_err(|e| e.to_string()))
        } else {
            let from_product = product.as_ref().and_then(|p| product_kahler_class(p, &data, &inv, n, &cycle).ok());
            match from_product {
                Some(k) => Ok(k),
                None => kahler_class(&data, &inv, n, &cycle).map_err(|e| e.to_string()),
            }
        };
        match kahler {
            Ok(k) => {
                report.check("kahler", true, Some(format!("top={}", k.top_pairing)));
                for kk in 0..=n {
                    match lefschetz_verify(&data, &inv, &k.cocycle, n, kk) {
                        Ok(e) => report.iso(
                            format!("hlt.k{kk}"),
                            e.iso,
                            format!("rank={} dims={}x{}", e.rank, e.cols, e.rows),
                        ),
                        Err(err) => report.check(format!("hlt.k{kk}"), false, Some(err.to_string())),
                    }
                }
            }
            Err(e) => report.check("kahler", false, Some(e)),
        }
    }
    if s.wants(Pipeline::Pd) {
        for e in poincare_duality_verify(&data, &inv, &cycle) {
            report.check(format!("pd.p{}", e.p), e.passed, Some(format!("rank={} dims={}x{}", e.rank, e.rows, e.cols)));
        }
    }
}

pub fn run_pipeline(s: &Scenario) -> Report {
    let mut report = Report::new(s.name.clone());
    if s.wants(Pipeline::Atlas) || s.wants(Pipeline::Seifert) {
        run_atlas(s, &mut report);
    }
    if s.wants(Pipeline::Taut) {
        run_taut(s, &mut report);
    }
    if s.wants(Pipeline::Transverse) {
        run_transverse(s, &mut report);
    }
    if s.wants(Pipeline::Cohomology) || s.wants(Pipeline::Hlt) || s.wants(Pipeline::Pd) {
        run_cohomology(s, &mut report);
    }
    report
}
