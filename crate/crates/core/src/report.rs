use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A computed value, not a verdict.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub id: String,
    pub status: Status,
    /// Right-hand side of the machine-readable line.
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub entries: Vec<ReportEntry>,
}

fn with_detail(head: &str, detail: Option<String>) -> String {
    match detail {
        Some(d) if !d.is_empty() => format!("{head} {d}"),
        _ => head.to_string(),
    }
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), entries: Vec::new() }
    }

    pub fn check(&mut self, id: impl Into<String>, passed: bool, detail: Option<String>) {
        let head = if passed { "PASS" } else { "FAIL" };
        self.entries.push(ReportEntry {
            id: id.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            value: with_detail(head, detail),
        });
    }

    /// Lefschetz verdicts read `ISO` instead of `PASS`.
    pub fn iso(&mut self, id: impl Into<String>, iso: bool, detail: String) {
        self.entries.push(ReportEntry {
            id: id.into(),
            status: if iso { Status::Pass } else { Status::Fail },
            value: with_detail(if iso { "ISO" } else { "FAIL" }, Some(detail)),
        });
    }

    pub fn info(&mut self, id: impl Into<String>, value: impl Into<String>) {
        self.entries.push(ReportEntry { id: id.into(), status: Status::Info, value: value.into() });
    }

    pub fn entry(&self, id: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn checks(&self) -> usize {
        self.entries.iter().filter(|e| e.status != Status::Info).count()
    }

    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn machine(&self) -> String {
        let mut out = format!("[report {}]\n", self.name);
        for e in &self.entries {
            let _ = writeln!(out, "{} = {}", e.id, e.value);
        }
        let _ = writeln!(out, "overall = {}", if self.passed() { "PASS" } else { "FAIL" });
        out
    }

    pub fn human(&self) -> String {
        let width = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
        let mut out = format!("Scenario {}\n", self.name);
        for e in &self.entries {
            let tag = match e.status {
                Status::Pass => "ok  ",
                Status::Fail => "FAIL",
                Status::Info => "    ",
            };
            let _ = writeln!(out, "  {tag}  {:width$}  {}", e.id, e.value);
        }
        let _ = writeln!(
            out,
            "Overall: {} ({} checks, {} failed)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks(),
            self.failures()
        );
        out
    }
}

const EXPLANATIONS: [(&str, &str); 24] = [
    ("atlas.chart", "the chart group is a finite group of unitary matrices"),
    ("atlas.overlap", "some change of charts connects the two charts of a declared overlap"),
    ("atlas.unitary", "the linear part of a change of charts is unitary"),
    ("atlas.domain", "a change of charts maps sampled points of its domain into the target chart"),
    ("atlas.witness", "two changes with the same domain differ by a unique element of the target group (the witness)"),
    ("atlas.build", "the atlas could be assembled from the scenario"),
    ("seifert.free", "the lifted chart group acts freely on sampled unitary frames"),
    ("seifert.equivariance", "the lifted group action commutes with the right U(n) action, exhaustively over the group"),
    ("seifert.well_defined", "gluing frame classes gives the same target class for every representative and change of charts"),
    ("seifert.inverse", "gluing i -> j followed by j -> i returns the original frame class"),
    ("seifert.cocycle", "gluing i -> j -> k agrees with gluing i -> k on frame classes"),
    ("seifert.fiber", "stabilizer order of the chart origin; s > 1 marks an exceptional fiber"),
    ("taut.detM1", "the rescaled Gram matrix M1 = u0 M0 has determinant 1 at every sample point"),
    ("taut.orbit_volume", "every sampled orbit has volume (2 pi)^m under the rescaled metric g1"),
    ("taut.invariance", "u0 and M0 are constant along sampled orbits"),
    ("taut.split", "the split metric keeps the vertical Gram matrix of g1"),
    ("taut.finite_average", "the metric averaged over a finite group is exactly invariant"),
    ("tk.", "transverse Kaehler form: closed, vanishing on vertical fields, positive on the normal space"),
    ("basic.", "a basic form: it and its differential vanish on vertical fields"),
    ("action.", "the group acts simplicially and the vertex permutations form a homomorphic image of the declared group"),
    ("betti", "Betti numbers of the complex (betti) and of the invariant part (betti.inv), over Q"),
    ("kahler", "an invariant degree-2 class whose top power pairs nontrivially with the fundamental cycle"),
    ("hlt.k", "cup product with the k-th power of the Kaehler class is an isomorphism H^(n-k) -> H^(n+k) on invariants"),
    ("pd.p", "the cup product pairing H^p x H^(2n-p) -> Q against the fundamental cycle is nondegenerate on invariants"),
];

const MORE_EXPLANATIONS: [(&str, &str); 4] = [
    ("fundamental_cycle", "the complex is a closed orientable pseudomanifold and the group preserves its orientation"),
    ("projector", "the averaging projector is idempotent on every degree"),
    ("quotient.dim", "the complex has real dimension 2n for the declared complex dimension n"),
    ("overall", "conjunction of all verdicts"),
];

/// Description of a check family, matched by id prefix.
pub fn explain(check_id: &str) -> Option<&'static str> {
    EXPLANATIONS
        .iter()
        .chain(MORE_EXPLANATIONS.iter())
        .filter(|(prefix, _)| check_id.starts_with(prefix))
        .max_by_key(|(prefix, _)| prefix.len())
        .map(|(_, text)| *text)
}
