//! Acceptance runner: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lefschetz_core::atlas::{equivalent_changes, CycloMatrix, OrbifoldAtlas};
use lefschetz_core::catalog::{catalog, catalog_text, default_names};
use lefschetz_core::cohomology::cochain::{cup_product, pair, pull_cochain};
use lefschetz_core::cohomology::invariant::projector_is_idempotent;
use lefschetz_core::cohomology::lefschetz::product_kahler_class;
use lefschetz_core::cohomology::{
    invariant_cohomology, lefschetz_verify, quotient_fundamental_cycle, CohomologyData, SimplicialComplex,
};
use lefschetz_core::foliation::metric::{conformal_factor, gram_matrix, ConformalFactor, MetricField};
use lefschetz_core::foliation::taut::sphere_samples;
use lefschetz_core::foliation::transverse::{
    basic_fixtures, basic_form_check, product_chart_grid, product_chart_vertical, standard_j, tk_fixture,
    transverse_kahler_check,
};
use lefschetz_core::foliation::{run_taut_suite, PolyForm, PolyVectorField, TautConfig, TorusAction};
use lefschetz_core::frame::{run_seifert_suite, SeifertOptions};
use lefschetz_core::pipeline::{build_action, build_atlas, build_complex, run_pipeline};
use lefschetz_core::poly::Poly;
use lefschetz_core::rational::{frac, int, Rational};
use lefschetz_core::report::Report;
use lefschetz_core::scenario::Scenario;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DET_TOL: f64 = 1e-12;
const VOLUME_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-12;
const GRAM_ORACLE_TOL: f64 = 1e-12;
const SAMPLE_POINTS: usize = 1000;
const ORBITS: usize = 50;
const EQUIVARIANCE_FRAMES: usize = 10;
const GRID_POINTS: usize = 25;
const RANDOM_FORMS: usize = 100;
const RANDOM_SCALARS: usize = 20;
const RELABELINGS: usize = 5;

const SEIFERT_BUDGET: Duration = Duration::from_secs(10);
const TAUT_BUDGET: Duration = Duration::from_secs(30);
const T4_BUDGET: Duration = Duration::from_secs(120);
const PROPERTY_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), notes: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn budget(&mut self, start: Instant, limit: Duration, what: &str) {
        let t = start.elapsed();
        self.note(format!("{what} {:.2}s/{}s", t.as_secs_f64(), limit.as_secs()));
        self.expect(t < limit, format!("{what} took {t:?}"));
    }
}

fn scenario(name: &str) -> Scenario {
    catalog(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn atlas_of(name: &str) -> OrbifoldAtlas {
    build_atlas(scenario(name).atlas.as_ref().expect("atlas")).expect("atlas builds")
}

fn value<'a>(r: &'a Report, id: &str) -> &'a str {
    r.entry(id).map_or("<missing>", |e| e.value.as_str())
}

/// Facets and vertex permutations of a catalog quotient, as plain data.
fn quotient_data(s: &Scenario) -> (Vec<Vec<usize>>, usize, Vec<Vec<usize>>) {
    let q = s.quotient.as_ref().expect("quotient");
    let (complex, _) = build_complex(s, &q.complex).expect("complex");
    let facets: Vec<Vec<usize>> = complex.facets().to_vec();
    let spec = s.group(&q.action).expect("action");
    let action = build_action(spec, complex.vertex_count()).expect("action builds");
    let generators: Vec<Vec<usize>> = action.elements().to_vec();
    (facets, complex.vertex_count(), common::permutation_group(complex.vertex_count(), &generators))
}

fn cyclic_order(m: &CycloMatrix) -> usize {
    let mut p = m.clone();
    for k in 1..=64 {
        if p.is_identity() {
            return k;
        }
        p = p.mul(m);
    }
    usize::MAX
}

fn c1_seifert() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let opts = SeifertOptions { samples: GRID_POINTS, frames: EQUIVARIANCE_FRAMES, ..SeifertOptions::default() };
    for name in ["football:2", "football:3", "football:4", "quaternion-chart"] {
        let atlas = atlas_of(name);
        let checks = run_seifert_suite(&atlas, &opts);
        for c in &checks {
            out.expect(c.passed, format!("{name} {} {:?}", c.id, c.witness));
        }
        for chart in atlas.charts() {
            // oracle: enumerate the group by closing under products
            let gens: Vec<CycloMatrix> = chart.group.elements().iter().map(|g| g.matrix().clone()).collect();
            let mut elems: Vec<CycloMatrix> = vec![CycloMatrix::identity(chart.n)];
            let mut i = 0;
            while i < elems.len() {
                for g in &gens {
                    let x = elems[i].mul(g);
                    if !elems.contains(&x) {
                        elems.push(x);
                    }
                }
                i += 1;
            }
            let order = elems.len();
            out.expect(order == chart.group.order(), format!("{name} chart {} order", chart.id));
            let expected_order = match name {
                "quaternion-chart" => 8,
                _ => name[9..].parse().unwrap(),
            };
            out.expect(order == expected_order, format!("{name} chart {} has order {order}", chart.id));
            let max_elem = elems.iter().map(cyclic_order).max().unwrap_or(1);
            out.expect(order.is_multiple_of(max_elem), format!("{name} element orders divide {order}"));
            let id = format!("seifert.equivariance.{}", chart.id);
            let eq = checks.iter().find(|c| c.id == id);
            let expected = format!("{} exact comparisons", order * EQUIVARIANCE_FRAMES);
            out.expect(eq.and_then(|c| c.witness.as_deref()) == Some(expected.as_str()), format!("{name} {id} count"));
            let free = format!("seifert.free.{}", chart.id);
            out.expect(checks.iter().any(|c| c.id == free), format!("{name} {free}"));
        }
        for &(i, j) in atlas.overlaps() {
            let id = format!("seifert.well_defined.{i}.{j}");
            out.expect(checks.iter().any(|c| c.id == id && c.passed), format!("{name} {id}"));
        }
        let cocycles = checks.iter().filter(|c| c.id.starts_with("seifert.cocycle")).count();
        out.note(format!("{name}: {} checks ({cocycles} cocycle)", checks.len()));
        if name.starts_with("football") {
            out.expect(cocycles > 0, format!("{name} has no cocycle triple"));
        }
    }
    // expected-fail control
    let bad = run_seifert_suite(&atlas_of("cocycle-counterexample"), &opts);
    out.expect(bad.iter().any(|c| c.id.starts_with("seifert.cocycle") && !c.passed), "counterexample cocycle not rejected");
    out.budget(start, SEIFERT_BUDGET, "runtime");
    out
}

fn c2_taut() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for (p, q) in [(1i64, 2i64), (2, 3)] {
        let action = TorusAction::circle(&[p, q]).unwrap();
        let mut cfg = TautConfig::new(action.clone(), MetricField::flat(4));
        cfg.samples = SAMPLE_POINTS;
        cfg.orbits = ORBITS;
        cfg.tol = DET_TOL;
        let r = run_taut_suite(&cfg).unwrap();
        out.expect(r.det_m1.passed && r.det_m1.max_dev <= DET_TOL, format!("({p},{q}) detM1 {:e}", r.det_m1.max_dev));
        out.expect(
            r.orbit_volume.passed && r.orbit_volume.max_dev <= VOLUME_TOL,
            format!("({p},{q}) volume {:e}", r.orbit_volume.max_dev),
        );
        out.expect(
            r.invariance.passed && r.invariance.max_dev <= INVARIANCE_TOL,
            format!("({p},{q}) invariance {:e}", r.invariance.max_dev),
        );
        out.expect(r.split.passed, format!("({p},{q}) split"));
        // oracle: M0 = p²|z1|² + q²|z2|², so u0 M0 = 1 and the orbit length is 2π
        let fields = action.fundamental_fields();
        let mut dev: f64 = 0.0;
        for x in sphere_samples(4, SAMPLE_POINTS, cfg.seed) {
            let m0 = gram_matrix(&MetricField::flat(4), &fields, &x).unwrap()[(0, 0)];
            let closed = (p * p) as f64 * (x[0] * x[0] + x[1] * x[1]) + (q * q) as f64 * (x[2] * x[2] + x[3] * x[3]);
            dev = dev.max((m0 - closed).abs());
        }
        out.expect(dev <= GRAM_ORACLE_TOL, format!("({p},{q}) Gram oracle {dev:e}"));
        out.note(format!(
            "({p},{q}) det {:.1e} vol {:.1e} inv {:.1e}",
            r.det_m1.max_dev, r.orbit_volume.max_dev, r.invariance.max_dev
        ));
    }
    out.budget(start, TAUT_BUDGET, "runtime");
    out
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize) -> Poly {
    let terms: Vec<(Vec<u32>, Rational)> = (0..rng.random_range(0..4))
        .map(|_| ((0..dim).map(|_| rng.random_range(0..3)).collect(), int(rng.random_range(-3..=3))))
        .collect();
    Poly::from_terms(dim, terms)
}

fn random_form(rng: &mut ChaCha8Rng, dim: usize, p: usize) -> PolyForm {
    let mut out = PolyForm::zero(dim, p);
    for idx in common::index_sets(dim, p) {
        out = out.add(&PolyForm::monomial(random_poly(rng, dim), &idx).unwrap());
    }
    out
}

fn c3_transverse() -> Outcome {
    let mut out = Outcome::new();
    let j = standard_j(1, 1);
    let vertical = product_chart_vertical();
    let grid = product_chart_grid(5, 0.4);
    let flat = transverse_kahler_check(&tk_fixture("flat").unwrap(), &j, &vertical, &grid).unwrap();
    out.expect(flat.closed && flat.kernel && flat.positive, format!("flat {flat:?}"));
    let pert = transverse_kahler_check(&tk_fixture("perturbed").unwrap(), &j, &vertical, &grid).unwrap();
    out.expect(pert.passed(), format!("perturbed {pert:?}"));
    let theta = transverse_kahler_check(&tk_fixture("theta-x").unwrap(), &j, &vertical, &grid).unwrap();
    out.expect(!theta.kernel, "dθ∧dx passes the kernel check");
    let dtheta = PolyForm::coordinate(3, 2);
    out.expect(!basic_form_check(&dtheta, &vertical).contraction, "dθ has vertical kernel");
    for (name, form, expected) in basic_fixtures() {
        out.expect(basic_form_check(&form, &vertical).passed() == expected, format!("basic {name}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    let (mut dd, mut leibniz, mut cartan) = (0, 0, 0);
    for i in 0..RANDOM_FORMS {
        let p = i % 3;
        let a = random_form(&mut rng, 3, p);
        let b = random_form(&mut rng, 3, 1);
        let z: Vec<Poly> = (0..3).map(|_| random_poly(&mut rng, 3)).collect();
        let field = PolyVectorField::new(z.clone());
        if a.d().d().is_zero() {
            dd += 1;
        }
        let sign = if p % 2 == 0 { int(1) } else { int(-1) };
        if a.wedge(&b).d() == a.d().wedge(&b).add(&a.wedge(&b.d()).scale(&sign)) {
            leibniz += 1;
        }
        // on functions ι_Z f vanishes and Cartan reads L_Z f = ι_Z df
        let lhs = if p == 0 { a.d().interior(&field) } else { a.interior(&field).d().add(&a.d().interior(&field)) };
        if lhs == common::lie_derivative(&a, &z) {
            cartan += 1;
        }
    }
    out.expect(dd == RANDOM_FORMS && leibniz == RANDOM_FORMS && cartan == RANDOM_FORMS, "identity failure");
    out.note(format!("min_eig={:.3} identities {dd}/{leibniz}/{cartan} of {RANDOM_FORMS}", flat.min_eigenvalue));
    out
}

struct QuotientRun {
    name: &'static str,
    report: Report,
    oracle_inv: Vec<usize>,
    oracle_betti: Vec<usize>,
}

fn quotient_runs() -> (Vec<QuotientRun>, Duration) {
    let mut runs = Vec::new();
    let mut t4_time = Duration::ZERO;
    for name in ["football:3", "pillowcase", "torus7", "octahedron", "rp2-antipodal", "t4", "t4-z2"] {
        let s = scenario(name);
        let (facets, n, group) = quotient_data(&s);
        let start = Instant::now();
        let report = run_pipeline(&s);
        if name == "t4-z2" {
            t4_time = start.elapsed();
        }
        let trivial = vec![(0..n).collect::<Vec<usize>>()];
        runs.push(QuotientRun {
            name,
            report,
            oracle_inv: common::orbit_betti(&facets, &group),
            oracle_betti: common::orbit_betti(&facets, &trivial),
        });
    }
    (runs, t4_time)
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn c4_betti(runs: &[QuotientRun], t4_time: Duration) -> Outcome {
    let mut out = Outcome::new();
    let golden_betti = [("octahedron", "1,0,1"), ("torus7", "1,2,1"), ("t4", "1,4,6,4,1")];
    let golden_inv = [("football:3", "1,0,1"), ("pillowcase", "1,0,1"), ("rp2-antipodal", "1,0,0"), ("t4-z2", "1,0,6,0,1")];
    for r in runs {
        out.expect(value(&r.report, "betti") == join(&r.oracle_betti), format!("{} betti vs oracle", r.name));
        out.expect(value(&r.report, "betti.inv") == join(&r.oracle_inv), format!("{} betti.inv vs oracle", r.name));
    }
    for (name, want) in golden_betti {
        let r = runs.iter().find(|r| r.name == name).unwrap();
        out.expect(join(&r.oracle_betti) == want, format!("{name} oracle betti {}", join(&r.oracle_betti)));
        out.expect(value(&r.report, "betti") == want, format!("{name} betti"));
    }
    for (name, want) in golden_inv {
        let r = runs.iter().find(|r| r.name == name).unwrap();
        out.expect(join(&r.oracle_inv) == want, format!("{name} oracle inv {}", join(&r.oracle_inv)));
        out.expect(value(&r.report, "betti.inv") == want, format!("{name} betti.inv"));
    }
    // T⁴ against the sparse oracle on the test-side staircase product
    let torus: Vec<Vec<usize>> = common::torus7()
        .iter()
        .map(|f| f.iter().map(|&v| lefschetz_core::catalog::TORUS7_REVERSING_LABELS[v]).collect())
        .collect();
    let direct = common::betti(&common::product_facets(&torus, &torus, 7), false);
    out.expect(join(&direct) == "1,4,6,4,1", "staircase oracle for T⁴");
    out.note(format!("t4-z2 {:.3}s/{}s", t4_time.as_secs_f64(), T4_BUDGET.as_secs()));
    out.expect(t4_time < T4_BUDGET, "t4-z2 runtime");
    out
}

/// `⟨ω², [M]⟩` by a test-side Alexander–Whitney evaluation on the facets.
fn top_square(complex: &SimplicialComplex, omega: &[Rational], cycle: &[(usize, i64)]) -> Rational {
    let two = &complex.simplices(2);
    let index: std::collections::HashMap<&Vec<usize>, usize> = two.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut total = Rational::zero();
    for &(i, c) in cycle {
        let s = &complex.simplices(4)[i];
        let front = &omega[index[&s[..3].to_vec()]];
        let back = &omega[index[&s[2..].to_vec()]];
        total += front * back * int(c);
    }
    total
}

fn c5_hlt(runs: &[QuotientRun]) -> Outcome {
    let mut out = Outcome::new();
    let golden: [(&str, &[(usize, &str)]); 5] = [
        ("football:3", &[(1, "1x1")]),
        ("torus7", &[(0, "2x2"), (1, "1x1")]),
        ("octahedron", &[(1, "1x1")]),
        ("t4", &[(1, "4x4"), (2, "1x1")]),
        ("t4-z2", &[(0, "6x6"), (1, "0x0"), (2, "1x1")]),
    ];
    for (name, entries) in golden {
        let r = runs.iter().find(|r| r.name == name).unwrap();
        let n = (r.oracle_inv.len() - 1) / 2;
        for &(k, dims) in entries {
            let v = value(&r.report, &format!("hlt.k{k}"));
            let oracle_dims = format!("{}x{}", r.oracle_inv[n - k], r.oracle_inv[n + k]);
            out.expect(oracle_dims == dims, format!("{name} k={k} oracle dims {oracle_dims}"));
            let rank = r.oracle_inv[n - k];
            out.expect(v == format!("ISO rank={rank} dims={dims}"), format!("{name} hlt.k{k} = {v}"));
        }
    }
    // ⟨ω², [T⁴]⟩ = ±2 for ω = ω₁ + ω₂, by direct evaluation
    for name in ["t4", "t4-z2"] {
        let s = scenario(name);
        let (complex, product) = build_complex(&s, "product").unwrap();
        let product = product.unwrap();
        let spec = s.group("group").unwrap();
        let action = build_action(spec, complex.vertex_count()).unwrap();
        let data = CohomologyData::compute(Arc::new(complex)).unwrap();
        let inv = invariant_cohomology(&data, &action).unwrap();
        let cycle = quotient_fundamental_cycle(data.complex(), &action).unwrap();
        let boundary = common::boundary_rows(&common::faces(data.complex().facets()), 4);
        let mut acc = vec![0i64; data.complex().count(3)];
        for &(i, c) in &cycle {
            for &(j, s) in &boundary[i] {
                acc[j] += s * c;
            }
        }
        out.expect(acc.iter().all(|&x| x == 0) && cycle.len() == data.complex().count(4), "fundamental cycle");
        let kahler = product_kahler_class(&product, &data, &inv, 2, &cycle).unwrap();
        let direct = top_square(data.complex(), &kahler.cocycle, &cycle);
        out.expect(direct.abs() == int(2), format!("{name} direct ⟨ω²,[M]⟩ = {direct}"));
        out.expect(direct == kahler.top_pairing, format!("{name} library top pairing {}", kahler.top_pairing));
        out.expect(value(&runs.iter().find(|r| r.name == name).unwrap().report, "kahler") == format!("PASS top={}", direct), format!("{name} kahler line"));
        out.note(format!("{name} top={direct}"));
    }
    out
}

fn c6_duality(runs: &[QuotientRun]) -> Outcome {
    let mut out = Outcome::new();
    for name in ["octahedron", "torus7", "football:3", "pillowcase", "t4-z2"] {
        let r = runs.iter().find(|r| r.name == name).unwrap();
        for (p, &b) in r.oracle_inv.iter().enumerate() {
            let v = value(&r.report, &format!("pd.p{p}"));
            let dual = r.oracle_inv[r.oracle_inv.len() - 1 - p];
            out.expect(b == dual, format!("{name} oracle asymmetric at {p}"));
            out.expect(v == format!("PASS rank={b} dims={b}x{dual}"), format!("{name} pd.p{p} = {v}"));
        }
    }
    let rp2 = runs.iter().find(|r| r.name == "rp2-antipodal").unwrap();
    out.expect(value(&rp2.report, "fundamental_cycle") == "FAIL NonOrientable", "rp2-antipodal orientation");
    out.expect(!rp2.report.passed(), "rp2-antipodal reported PASS");
    out
}

fn c7_properties() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    // round trip over every overlap and every target group element
    let mut trips = 0;
    for name in ["football:2", "football:3", "football:4", "quaternion-chart", "cocycle-counterexample"] {
        let atlas = atlas_of(name);
        for phi in atlas.changes() {
            let group = &atlas.chart(phi.target).unwrap().group;
            for g in group.elements() {
                let moved = phi.post_compose(g.matrix());
                let found = equivalent_changes(phi, &moved, group).unwrap();
                out.expect(found.as_ref() == Some(g), format!("{name} {} round trip", phi.label()));
                trips += 1;
            }
        }
    }
    // P² = P on every quotient in the catalog
    let mut projectors = 0;
    for name in default_names() {
        let s = scenario(&name);
        let Some(q) = &s.quotient else { continue };
        let (complex, _) = build_complex(&s, &q.complex).unwrap();
        let action = build_action(s.group(&q.action).unwrap(), complex.vertex_count()).unwrap();
        let data = CohomologyData::compute(Arc::new(complex)).unwrap();
        let inv = invariant_cohomology(&data, &action).unwrap();
        for (p, d) in inv.degrees.iter().enumerate() {
            out.expect(projector_is_idempotent(&d.projector), format!("{name} P²≠P in degree {p}"));
            projectors += 1;
        }
    }
    // Betti invariance under random reorderings of the 7-vertex torus
    let mut rng = ChaCha8Rng::seed_from_u64(0x7075);
    let base = SimplicialComplex::build(None, &common::torus7()).unwrap();
    for _ in 0..RELABELINGS {
        let mut perm: Vec<usize> = (0..7).collect();
        for i in (1..7).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let data = CohomologyData::compute(Arc::new(base.relabel(&perm).unwrap())).unwrap();
        out.expect(data.betti() == vec![1, 2, 1], format!("relabel {perm:?}"));
    }
    // u0(c M0) = u0(M0) / c, exactly
    let m0s: [Vec<Vec<Rational>>; 2] = [vec![vec![int(3)]], vec![vec![int(5), int(4)], vec![int(4), int(5)]]];
    for _ in 0..RANDOM_SCALARS {
        let c = frac(rng.random_range(1..=50), rng.random_range(1..=50));
        for m0 in &m0s {
            let m = m0.len();
            let scaled: Vec<Vec<Rational>> = m0.iter().map(|r| r.iter().map(|x| x * &c).collect()).collect();
            let base = conformal_factor(m0, m).unwrap();
            let got = conformal_factor(&scaled, m).unwrap();
            let ok = matches!((&base, &got), (ConformalFactor::Exact(b), ConformalFactor::Exact(g)) if *g == b / &c);
            out.expect(ok, format!("homogeneity at c={c}: {base:?} {got:?}"));
        }
    }
    // Lefschetz ranks under ω ↦ g·ω on t4-z2
    let s = scenario("t4-z2");
    let (complex, product) = build_complex(&s, "product").unwrap();
    let action = build_action(s.group("group").unwrap(), complex.vertex_count()).unwrap();
    let data = CohomologyData::compute(Arc::new(complex)).unwrap();
    let inv = invariant_cohomology(&data, &action).unwrap();
    let cycle = quotient_fundamental_cycle(data.complex(), &action).unwrap();
    let omega = product_kahler_class(&product.unwrap(), &data, &inv, 2, &cycle).unwrap().cocycle;
    for g in action.elements() {
        let moved = pull_cochain(data.complex(), 2, g, &omega).unwrap();
        let sq = cup_product(data.complex(), 2, &moved, 2, &moved);
        out.expect(!pair(&sq, &cycle).is_zero(), "g·ω lost its top power");
        for k in 0..=2 {
            let a = lefschetz_verify(&data, &inv, &omega, 2, k).unwrap();
            let b = lefschetz_verify(&data, &inv, &moved, 2, k).unwrap();
            out.expect(a.rank == b.rank && a.iso == b.iso, format!("rank change at k={k}"));
        }
    }
    out.note(format!("{trips} round trips, {projectors} projectors"));
    out.budget(start, PROPERTY_BUDGET, "runtime");
    out
}

fn c8_determinism() -> Outcome {
    let mut out = Outcome::new();
    let names = default_names();
    for name in &names {
        let first = run_pipeline(&scenario(name)).machine();
        let text = catalog_text(name).unwrap();
        let second = run_pipeline(&lefschetz_core::scenario::parse_scenario(&text).unwrap()).machine();
        out.expect(first == second, format!("{name} differs between runs"));
    }
    out.note(format!("{} scenarios", names.len()));
    out
}

fn main() -> ExitCode {
    let (runs, t4_time) = quotient_runs();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("seifert construction", c1_seifert()),
        ("taut metric", c2_taut()),
        ("transverse kaehler and basic forms", c3_transverse()),
        ("betti numbers", c4_betti(&runs, t4_time)),
        ("hard lefschetz", c5_hlt(&runs)),
        ("poincare duality", c6_duality(&runs)),
        ("properties", c7_properties()),
        ("determinism", c8_determinism()),
    ];
    let mut failed = 0;
    for (i, (title, o)) in criteria.iter().enumerate() {
        let ok = o.failures.is_empty();
        if !ok {
            failed += 1;
        }
        println!("criterion {} {:<36} {}  [{}]", i + 1, title, if ok { "PASS" } else { "FAIL" }, o.notes.join("; "));
        for f in &o.failures {
            println!("    failure: {f}");
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
