//! Built-in scenarios, generated as scenario text and parsed like any file.

use std::fmt::Write as _;

use crate::scenario::{parse_scenario, Scenario, ScenarioError};

/// Catalog names with a one-line description; parameterized entries are
/// shown with placeholders.
pub const ENTRIES: [(&str, &str); 10] = [
    ("football:<k>", "bipyramid over a k-gon with the Z_k rotation; three-chart football atlas (k >= 2)"),
    ("pillowcase", "7-vertex torus with v -> -v"),
    ("torus7", "7-vertex torus, trivial group"),
    ("t4", "product of two 7-vertex tori, trivial group"),
    ("t4-z2", "product of two 7-vertex tori with the diagonal v -> -v"),
    ("octahedron", "octahedral 2-sphere, trivial group"),
    ("rp2-antipodal", "octahedron with the antipodal map (expected to fail duality)"),
    ("weighted-hopf:<p>:<q>", "S^3 with the circle action of weights (p, q)"),
    ("quaternion-chart", "one chart C^2 modulo the quaternion group of order 8"),
    ("cocycle-counterexample", "football:3 atlas with an inconsistent change of charts (expected to fail)"),
];

/// Names to run when exercising the whole catalog.
pub fn default_names() -> Vec<String> {
    [
        "football:2",
        "football:3",
        "football:4",
        "pillowcase",
        "torus7",
        "t4",
        "t4-z2",
        "octahedron",
        "rp2-antipodal",
        "weighted-hopf:1:2",
        "weighted-hopf:2:3",
        "quaternion-chart",
        "cocycle-counterexample",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn facets_text(facets: &[Vec<usize>]) -> String {
    list(facets.iter().map(|f| list(f.iter())))
}

/// `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7_facets() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..7 {
        out.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        out.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    out
}

/// Relabeling of the 7-vertex torus under which `v ↦ −v` becomes the
/// order reversal `v ↦ 6 − v`.
pub const TORUS7_REVERSING_LABELS: [usize; 7] = [3, 0, 1, 2, 4, 5, 6];

pub fn octahedron_facets() -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                out.push(vec![a, b, c]);
            }
        }
    }
    out
}

/// Bipyramid over an `m`-gon: equator `0..m`, poles `m` and `m + 1`.
pub fn bipyramid_facets(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..m {
        out.push(vec![i, (i + 1) % m, m]);
        out.push(vec![i, (i + 1) % m, m + 1]);
    }
    out
}

fn football_atlas(text: &mut String, k: usize, counterexample: bool) {
    for id in 0..3 {
        let _ = writeln!(text, "\n[chart {id}]\nn = 1\nradius = 2\ncyclotomic_order = {k}\ngenerators = [[z]]");
    }
    let mut change = |s: usize, t: usize, linear: &str, center: &str, radius: &str| {
        let _ = writeln!(
            text,
            "\n[change {s} -> {t}]\nlinear = [[{linear}]]\noffset = [0]\ncenter = [{center}]\nradius = {radius}"
        );
    };
    change(0, 1, "1", "1", "1/2");
    change(0, 1, "z", "1", "1/2");
    change(0, 1, &format!("z^{}", k - 1), "z", "1/2");
    change(1, 0, "1", "1", "1/2");
    change(1, 2, "1", "1", "1");
    change(0, 2, if counterexample { "-1" } else { "1" }, "1", "1/2");
}

fn football(k: usize) -> String {
    let mut t = format!("name = football:{k}\npipelines = atlas, seifert, cohomology, hlt, pd\n");
    football_atlas(&mut t, k, false);
    // k = 2 uses the square bipyramid rotated by a half turn
    let m = if k == 2 { 4 } else { k };
    let step = m / k;
    let rotation: Vec<usize> = (0..m).map(|v| (v + step) % m).chain([m, m + 1]).collect();
    let _ = write!(
        t,
        "\n[complex sphere]\nvertices = {}\nfacets = {}\n\n[action rotation]\ngroup = cyclic:{k}\nmaps = [{}]\n\n[quotient]\ncomplex = sphere\naction = rotation\ncomplex_dim_n = 1\n",
        m + 2,
        facets_text(&bipyramid_facets(m)),
        list(rotation)
    );
    t
}

fn cocycle_counterexample() -> String {
    let mut t = String::from("name = cocycle-counterexample\npipelines = atlas, seifert\n");
    football_atlas(&mut t, 3, true);
    t
}

fn surface_quotient(name: &str, pipelines: &str, vertices: usize, facets: &[Vec<usize>], map: &[usize], order: usize) -> String {
    format!(
        "name = {name}\npipelines = {pipelines}\n\n[complex surface]\nvertices = {vertices}\nfacets = {}\n\n[action group]\ngroup = cyclic:{order}\nmaps = [{}]\n\n[quotient]\ncomplex = surface\naction = group\ncomplex_dim_n = 1\n",
        facets_text(facets),
        list(map.iter())
    )
}

fn t4(name: &str, diagonal: bool) -> String {
    let facets: Vec<Vec<usize>> =
        torus7_facets().iter().map(|f| f.iter().map(|&v| TORUS7_REVERSING_LABELS[v]).collect()).collect();
    let map: Vec<usize> = (0..49)
        .map(|x| if diagonal { (6 - x / 7) * 7 + (6 - x % 7) } else { x })
        .collect();
    let order = if diagonal { 2 } else { 1 };
    format!(
        "name = {name}\npipelines = cohomology, hlt, pd\n\n[complex torus]\nvertices = 7\nfacets = {}\n\n[complex product]\nproduct = torus x torus\n\n[action group]\ngroup = cyclic:{order}\nmaps = [{}]\n\n[quotient]\ncomplex = product\naction = group\ncomplex_dim_n = 2\n",
        facets_text(&facets),
        list(map.iter())
    )
}

fn weighted_hopf(p: i64, q: i64) -> String {
    format!(
        "name = weighted-hopf:{p}:{q}\npipelines = taut, transverse\n\n[action]\ntype = circle\nweights = [{p}, {q}]\n\n[metric]\nkind = round\n\n[check taut]\nsamples = 1000\ntol = 1e-12\norbits = 50\n\n[check transverse]\nform = flat\ngrid = 5\nbasic = dx, x_dy\n"
    )
}

fn quaternion_chart() -> String {
    String::from(
        "name = quaternion-chart\npipelines = atlas, seifert\n\n[chart 0]\nn = 2\nradius = inf\ncyclotomic_order = 4\ngenerators = [[[z, 0], [0, -z]], [[0, 1], [-1, 0]]]\n",
    )
}

/// The documented text of a catalog entry.
pub fn catalog_text(name: &str) -> Result<String, ScenarioError> {
    let unknown = || ScenarioError::UnknownCatalogEntry(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    let text = match parts.as_slice() {
        ["football", k] => {
            let k: usize = k.parse().map_err(|_| unknown())?;
            if !(2..=64).contains(&k) {
                return Err(unknown());
            }
            football(k)
        }
        ["weighted-hopf", p, q] => {
            let p: i64 = p.parse().map_err(|_| unknown())?;
            let q: i64 = q.parse().map_err(|_| unknown())?;
            if p == 0 || q == 0 || p.abs() > 1000 || q.abs() > 1000 {
                return Err(unknown());
            }
            weighted_hopf(p, q)
        }
        ["pillowcase"] => {
            let inv: Vec<usize> = (0..7).map(|v| (7 - v) % 7).collect();
            surface_quotient("pillowcase", "cohomology, hlt, pd", 7, &torus7_facets(), &inv, 2)
        }
        ["torus7"] => {
            let id: Vec<usize> = (0..7).collect();
            surface_quotient("torus7", "cohomology, hlt, pd", 7, &torus7_facets(), &id, 1)
        }
        ["octahedron"] => {
            let id: Vec<usize> = (0..6).collect();
            surface_quotient("octahedron", "cohomology, hlt, pd", 6, &octahedron_facets(), &id, 1)
        }
        ["rp2-antipodal"] => {
            surface_quotient("rp2-antipodal", "cohomology, pd", 6, &octahedron_facets(), &[1, 0, 3, 2, 5, 4], 2)
        }
        ["t4"] => t4("t4", false),
        ["t4-z2"] => t4("t4-z2", true),
        ["quaternion-chart"] => quaternion_chart(),
        ["cocycle-counterexample"] => cocycle_counterexample(),
        _ => return Err(unknown()),
    };
    Ok(text)
}

pub fn catalog(name: &str) -> Result<Scenario, ScenarioError> {
    parse_scenario(&catalog_text(name)?)
}
