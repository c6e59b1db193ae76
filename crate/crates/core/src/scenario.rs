//! Line-oriented scenario files: `key = value` lines grouped under
//! `[block]` headers, `#` comments.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::atlas::{CycloMatrix, CycloVector, Radius};
use crate::cyclotomic::Cyclotomic;
use crate::frame::SeifertOptions;
use crate::linalg::Matrix;
use crate::poly::{parse_poly, Poly};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown pipeline '{name}'")]
    UnknownPipeline { line: usize, name: String },
    #[error("missing section [{section}]: {message}")]
    MissingSection { section: String, message: String },
    #[error("unknown catalog entry '{0}'")]
    UnknownCatalogEntry(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Parse { line, message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pipeline {
    Atlas,
    Seifert,
    Taut,
    Transverse,
    Cohomology,
    Hlt,
    Pd,
}

impl Pipeline {
    pub const ALL: [Pipeline; 7] = [
        Pipeline::Atlas,
        Pipeline::Seifert,
        Pipeline::Taut,
        Pipeline::Transverse,
        Pipeline::Cohomology,
        Pipeline::Hlt,
        Pipeline::Pd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Atlas => "atlas",
            Pipeline::Seifert => "seifert",
            Pipeline::Taut => "taut",
            Pipeline::Transverse => "transverse",
            Pipeline::Cohomology => "cohomology",
            Pipeline::Hlt => "hlt",
            Pipeline::Pd => "pd",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }
}

#[derive(Clone, Debug)]
pub struct ChartSpec {
    pub id: usize,
    pub n: usize,
    pub radius: Radius,
    pub order: u32,
    pub generators: Vec<CycloMatrix>,
}

#[derive(Clone, Debug)]
pub struct ChangeSpec {
    pub source: usize,
    pub target: usize,
    pub linear: CycloMatrix,
    pub offset: CycloVector,
    pub center: CycloVector,
    pub radius: Rational,
}

#[derive(Clone, Debug)]
pub struct AtlasSpec {
    pub charts: Vec<ChartSpec>,
    pub changes: Vec<ChangeSpec>,
    pub overlaps: Option<Vec<(usize, usize)>>,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryAction {
    /// Weight matrix: one row per circle factor, one column per complex
    /// coordinate.
    Torus(Vec<Vec<i64>>),
    /// Rational matrices on ℝ^d.
    Finite(Vec<Matrix>),
}

impl GeometryAction {
    pub fn real_dim(&self) -> usize {
        match self {
            GeometryAction::Torus(w) => 2 * w.first().map_or(0, Vec::len),
            GeometryAction::Finite(m) => m.first().map_or(0, Vec::len),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricKind {
    /// The ambient flat metric, sampled on the unit sphere.
    Round,
    Flat,
    Custom(Vec<Vec<Poly>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub kind: MetricKind,
    pub average: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TautSpec {
    pub samples: usize,
    pub tol: f64,
    pub orbits: usize,
    pub nodes: Option<usize>,
    pub seed: u64,
}

impl Default for TautSpec {
    fn default() -> Self {
        Self { samples: 1000, tol: 1e-12, orbits: 50, nodes: None, seed: 0x7a07 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransverseSpec {
    pub form: String,
    pub grid: usize,
    pub basic: Vec<String>,
}

impl Default for TransverseSpec {
    fn default() -> Self {
        Self { form: "flat".into(), grid: 5, basic: Vec::new() }
    }
}

pub const TK_FORMS: [&str; 3] = ["flat", "perturbed", "theta-x"];
pub const BASIC_FORMS: [&str; 4] = ["dx", "dt", "x_dy", "t_dy"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexSource {
    Facets { vertices: usize, facets: Vec<Vec<usize>> },
    Product(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSpec {
    pub id: String,
    pub source: ComplexSource,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Cyclic(usize),
    Product(Vec<usize>),
    /// `maps` lists every element; `table[a][b]` is the index of `a·b`.
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub id: String,
    pub kind: GroupKind,
    pub maps: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpec {
    pub complex: String,
    pub action: String,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub pipelines: Vec<Pipeline>,
    pub atlas: Option<AtlasSpec>,
    pub seifert: SeifertOptions,
    pub action: Option<GeometryAction>,
    pub metric: Option<MetricSpec>,
    pub taut: TautSpec,
    pub transverse: TransverseSpec,
    pub complexes: Vec<ComplexSpec>,
    pub groups: Vec<GroupSpec>,
    pub quotient: Option<QuotientSpec>,
    pub kahler: Option<Vec<(Vec<usize>, Rational)>>,
}

impl Scenario {
    pub fn wants(&self, p: Pipeline) -> bool {
        self.pipelines.contains(&p)
    }

    pub fn complex(&self, id: &str) -> Option<&ComplexSpec> {
        self.complexes.iter().find(|c| c.id == id)
    }

    pub fn group(&self, id: &str) -> Option<&GroupSpec> {
        self.groups.iter().find(|g| g.id == id)
    }
}

/// Bracketed values: atoms separated by commas, nested with `[...]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Atom(String),
    List(Vec<Value>),
}

impl Value {
    fn parse(text: &str) -> Result<Self, String> {
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let items = parse_items(&chars, &mut pos, false)?;
        if pos != chars.len() {
            return Err(format!("unexpected '{}'", chars[pos]));
        }
        Ok(if items.len() == 1 { items.into_iter().next().expect("one item") } else { Value::List(items) })
    }

    fn items(&self) -> Vec<&Value> {
        match self {
            Value::Atom(_) => vec![self],
            Value::List(v) => v.iter().collect(),
        }
    }

    fn atom(&self) -> Result<&str, String> {
        match self {
            Value::Atom(s) => Ok(s),
            Value::List(_) => Err("expected a single value, found a list".into()),
        }
    }

    fn list(&self) -> Result<&[Value], String> {
        match self {
            Value::List(v) => Ok(v),
            Value::Atom(a) => Err(format!("expected a bracketed list, found '{a}'")),
        }
    }
}

fn parse_items(chars: &[char], pos: &mut usize, nested: bool) -> Result<Vec<Value>, String> {
    let mut items = Vec::new();
    loop {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos < chars.len() && chars[*pos] == '[' {
            *pos += 1;
            let inner = parse_items(chars, pos, true)?;
            if *pos >= chars.len() || chars[*pos] != ']' {
                return Err("unclosed '['".into());
            }
            *pos += 1;
            items.push(Value::List(inner));
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        } else {
            let start = *pos;
            while *pos < chars.len() && !matches!(chars[*pos], '[' | ']' | ',') {
                *pos += 1;
            }
            let atom: String = chars[start..*pos].iter().collect::<String>().trim().to_string();
            if atom.is_empty() {
                if *pos < chars.len() && chars[*pos] == ']' && items.is_empty() && nested {
                    return Ok(items);
                }
                return Err("empty value".into());
            }
            items.push(Value::Atom(atom));
        }
        if *pos < chars.len() && chars[*pos] == ',' {
            *pos += 1;
            continue;
        }
        if *pos < chars.len() && chars[*pos] == '[' {
            return Err("missing ',' before '['".into());
        }
        if *pos < chars.len() && chars[*pos] == ']' && !nested {
            return Err("unbalanced ']'".into());
        }
        return Ok(items);
    }
}

#[derive(Debug)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
}

#[derive(Debug)]
struct Block {
    kind: String,
    args: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Block {
    fn take(&mut self, key: &str) -> Option<Entry> {
        let i = self.entries.iter().position(|e| e.key == key)?;
        Some(self.entries.remove(i))
    }

    fn require(&mut self, key: &str) -> Result<Entry, ScenarioError> {
        self.take(key).ok_or_else(|| parse_err(self.line, format!("[{} {}] needs '{key}'", self.kind, self.args)))
    }

    fn finish(self) -> Result<(), ScenarioError> {
        match self.entries.first() {
            Some(e) => Err(parse_err(e.line, format!("unknown key '{}' in [{}]", e.key, self.kind))),
            None => Ok(()),
        }
    }
}

fn lex(text: &str) -> Result<Vec<Block>, ScenarioError> {
    let mut blocks = vec![Block { kind: String::new(), args: String::new(), line: 1, entries: Vec::new() }];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or_else(|| parse_err(line, "unterminated block header"))?.trim();
            let (kind, args) = header.split_once(char::is_whitespace).unwrap_or((header, ""));
            if kind.is_empty() {
                return Err(parse_err(line, "empty block header"));
            }
            blocks.push(Block { kind: kind.to_string(), args: args.trim().to_string(), line, entries: Vec::new() });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| parse_err(line, "expected 'key = value'"))?;
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(parse_err(line, format!("malformed key '{key}'")));
        }
        let block = blocks.last_mut().expect("top block");
        if block.entries.iter().any(|e| e.key == key) {
            return Err(parse_err(line, format!("duplicate key '{key}'")));
        }
        let value = Value::parse(value.trim()).map_err(|m| parse_err(line, m))?;
        block.entries.push(Entry { key: key.to_string(), value, line });
    }
    Ok(blocks)
}

fn usize_of(v: &Value, line: usize) -> Result<usize, ScenarioError> {
    let a = v.atom().map_err(|m| parse_err(line, m))?;
    a.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found '{a}'")))
}

fn i64_of(v: &Value, line: usize) -> Result<i64, ScenarioError> {
    let a = v.atom().map_err(|m| parse_err(line, m))?;
    a.parse().map_err(|_| parse_err(line, format!("expected an integer, found '{a}'")))
}

fn rational_of(v: &Value, line: usize) -> Result<Rational, ScenarioError> {
    let a = v.atom().map_err(|m| parse_err(line, m))?;
    parse_rational(a).ok_or_else(|| parse_err(line, format!("malformed rational '{a}'")))
}

fn f64_of(v: &Value, line: usize) -> Result<f64, ScenarioError> {
    let a = v.atom().map_err(|m| parse_err(line, m))?;
    match a.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(parse_err(line, format!("malformed number '{a}'"))),
    }
}

fn bool_of(v: &Value, line: usize) -> Result<bool, ScenarioError> {
    match v.atom().map_err(|m| parse_err(line, m))? {
        "true" => Ok(true),
        "false" => Ok(false),
        a => Err(parse_err(line, format!("expected true or false, found '{a}'"))),
    }
}

fn usize_list(v: &Value, line: usize) -> Result<Vec<usize>, ScenarioError> {
    v.list().map_err(|m| parse_err(line, m))?.iter().map(|x| usize_of(x, line)).collect()
}

fn cyclo_of(v: &Value, order: u32, line: usize) -> Result<Cyclotomic, ScenarioError> {
    let a = v.atom().map_err(|m| parse_err(line, m))?;
    Cyclotomic::parse(a, order).map_err(|e| parse_err(line, format!("bad entry '{a}': {e}")))
}

fn cyclo_vector(v: &Value, order: u32, line: usize) -> Result<CycloVector, ScenarioError> {
    v.list().map_err(|m| parse_err(line, m))?.iter().map(|x| cyclo_of(x, order, line)).collect()
}

fn cyclo_matrix(v: &Value, order: u32, line: usize) -> Result<CycloMatrix, ScenarioError> {
    let rows = v
        .list()
        .map_err(|m| parse_err(line, m))?
        .iter()
        .map(|r| cyclo_vector(r, order, line))
        .collect::<Result<Vec<_>, _>>()?;
    CycloMatrix::from_rows(rows).map_err(|e| parse_err(line, e.to_string()))
}

fn rational_matrix(v: &Value, line: usize) -> Result<Matrix, ScenarioError> {
    let rows: Matrix = v
        .list()
        .map_err(|m| parse_err(line, m))?
        .iter()
        .map(|r| r.list().map_err(|m| parse_err(line, m))?.iter().map(|x| rational_of(x, line)).collect())
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(parse_err(line, "matrix must be square"));
    }
    Ok(rows)
}

/// Real coordinate names `x1, y1, …, xn, yn` of ℂⁿ.
pub fn real_coordinate_names(n: usize) -> Vec<String> {
    (1..=n).flat_map(|k| [format!("x{k}"), format!("y{k}")]).collect()
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut blocks = lex(text)?;
    let mut top = blocks.remove(0);

    let name = match top.take("name") {
        Some(e) => e.value.atom().map_err(|m| parse_err(e.line, m))?.to_string(),
        None => "unnamed".to_string(),
    };
    let mut pipelines = Vec::new();
    if let Some(e) = top.take("pipelines") {
        for item in e.value.items() {
            let s = item.atom().map_err(|m| parse_err(e.line, m))?;
            let p = Pipeline::from_name(s).ok_or_else(|| ScenarioError::UnknownPipeline { line: e.line, name: s.into() })?;
            if !pipelines.contains(&p) {
                pipelines.push(p);
            }
        }
    }
    pipelines.sort_unstable();
    top.finish()?;

    let mut charts: Vec<ChartSpec> = Vec::new();
    let mut raw_changes: Vec<Block> = Vec::new();
    let mut overlaps = None;
    let mut atlas_samples = 25;
    let mut seifert = SeifertOptions::default();
    let mut action: Option<GeometryAction> = None;
    let mut raw_metric: Option<Block> = None;
    let mut taut = TautSpec::default();
    let mut transverse = TransverseSpec::default();
    let mut complexes: Vec<ComplexSpec> = Vec::new();
    let mut groups: Vec<GroupSpec> = Vec::new();
    let mut quotient = None;
    let mut kahler = None;
    let mut seen_singletons: BTreeSet<String> = BTreeSet::new();

    for mut b in blocks {
        let singleton = matches!(b.kind.as_str(), "atlas" | "metric" | "quotient" | "kahler" | "check")
            || (b.kind == "action" && b.args.is_empty());
        if singleton && !seen_singletons.insert(format!("{} {}", b.kind, b.args)) {
            return Err(parse_err(b.line, format!("duplicate block [{} {}]", b.kind, b.args)));
        }
        match (b.kind.as_str(), b.args.is_empty()) {
            ("chart", false) => {
                let id: usize = b.args.parse().map_err(|_| parse_err(b.line, format!("bad chart id '{}'", b.args)))?;
                if charts.iter().any(|c| c.id == id) {
                    return Err(parse_err(b.line, format!("duplicate chart {id}")));
                }
                let e = b.require("n")?;
                let n = usize_of(&e.value, e.line)?;
                if n == 0 {
                    return Err(parse_err(e.line, "n must be positive"));
                }
                let e = b.require("radius")?;
                let radius = match e.value.atom().map_err(|m| parse_err(e.line, m))? {
                    "inf" => Radius::Infinite,
                    _ => {
                        let r = rational_of(&e.value, e.line)?;
                        if r <= Rational::from_integer(0.into()) {
                            return Err(parse_err(e.line, "radius must be positive"));
                        }
                        Radius::Finite(r)
                    }
                };
                let e = b.require("cyclotomic_order")?;
                let order = usize_of(&e.value, e.line)?;
                if order == 0 || order > 1 << 16 {
                    return Err(parse_err(e.line, "cyclotomic_order must be in 1..=65536"));
                }
                let order = order as u32;
                let generators = match b.take("generators") {
                    None => Vec::new(),
                    Some(e) => {
                        let list = e.value.list().map_err(|m| parse_err(e.line, m))?;
                        let list: Vec<&Value> =
                            if matches!(list.first(), Some(Value::List(r)) if matches!(r.first(), Some(Value::Atom(_)))) {
                                vec![&e.value]
                            } else {
                                list.iter().collect()
                            };
                        list.into_iter().map(|m| cyclo_matrix(m, order, e.line)).collect::<Result<_, _>>()?
                    }
                };
                b.finish()?;
                charts.push(ChartSpec { id, n, radius, order, generators });
            }
            ("change", false) => raw_changes.push(b),
            ("atlas", true) => {
                if let Some(e) = b.take("samples") {
                    atlas_samples = usize_of(&e.value, e.line)?;
                }
                if let Some(e) = b.take("overlaps") {
                    let pairs = e
                        .value
                        .list()
                        .map_err(|m| parse_err(e.line, m))?
                        .iter()
                        .map(|p| match usize_list(p, e.line)?.as_slice() {
                            [i, j] => Ok((*i, *j)),
                            _ => Err(parse_err(e.line, "overlaps are pairs [i, j]")),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    overlaps = Some(pairs);
                }
                b.finish()?;
            }
            ("check", false) => match b.args.as_str() {
                "seifert" => {
                    if let Some(e) = b.take("samples") {
                        seifert.samples = usize_of(&e.value, e.line)?;
                    }
                    if let Some(e) = b.take("frames") {
                        seifert.frames = usize_of(&e.value, e.line)?;
                    }
                    if let Some(e) = b.take("seed") {
                        seifert.seed = usize_of(&e.value, e.line)? as u64;
                    }
                    b.finish()?;
                }
                "taut" => {
                    if let Some(e) = b.take("samples") {
                        taut.samples = usize_of(&e.value, e.line)?;
                    }
                    if let Some(e) = b.take("tol") {
                        taut.tol = f64_of(&e.value, e.line)?;
                        if taut.tol <= 0.0 {
                            return Err(parse_err(e.line, "tol must be positive"));
                        }
                    }
                    if let Some(e) = b.take("orbits") {
                        taut.orbits = usize_of(&e.value, e.line)?;
                    }
                    if let Some(e) = b.take("nodes") {
                        taut.nodes = Some(usize_of(&e.value, e.line)?);
                    }
                    if let Some(e) = b.take("seed") {
                        taut.seed = usize_of(&e.value, e.line)? as u64;
                    }
                    b.finish()?;
                }
                "transverse" => {
                    if let Some(e) = b.take("form") {
                        let f = e.value.atom().map_err(|m| parse_err(e.line, m))?;
                        if !TK_FORMS.contains(&f) {
                            return Err(parse_err(e.line, format!("unknown form '{f}' (expected one of {})", TK_FORMS.join(", "))));
                        }
                        transverse.form = f.to_string();
                    }
                    if let Some(e) = b.take("grid") {
                        transverse.grid = usize_of(&e.value, e.line)?;
                    }
                    if let Some(e) = b.take("basic") {
                        for item in e.value.items() {
                            let f = item.atom().map_err(|m| parse_err(e.line, m))?;
                            if !BASIC_FORMS.contains(&f) {
                                return Err(parse_err(e.line, format!("unknown basic form '{f}'")));
                            }
                            transverse.basic.push(f.to_string());
                        }
                    }
                    b.finish()?;
                }
                other => return Err(parse_err(b.line, format!("unknown check block '{other}'"))),
            },
            ("action", true) => {
                let e = b.require("type")?;
                let kind = e.value.atom().map_err(|m| parse_err(e.line, m))?.to_string();
                action = Some(match kind.as_str() {
                    "circle" | "torus" => {
                        let e = b.require("weights")?;
                        let list = e.value.list().map_err(|m| parse_err(e.line, m))?;
                        let rows: Vec<Vec<i64>> = if kind == "circle" {
                            vec![list.iter().map(|x| i64_of(x, e.line)).collect::<Result<_, _>>()?]
                        } else {
                            list.iter()
                                .map(|r| r.list().map_err(|m| parse_err(e.line, m))?.iter().map(|x| i64_of(x, e.line)).collect())
                                .collect::<Result<_, _>>()?
                        };
                        let n = rows.first().map_or(0, Vec::len);
                        if n == 0 || rows.iter().any(|r| r.len() != n) {
                            return Err(parse_err(e.line, "weights must be a nonempty rectangular array"));
                        }
                        GeometryAction::Torus(rows)
                    }
                    "finite" => {
                        let e = b.require("elements")?;
                        let mats = e
                            .value
                            .list()
                            .map_err(|m| parse_err(e.line, m))?
                            .iter()
                            .map(|m| rational_matrix(m, e.line))
                            .collect::<Result<Vec<_>, _>>()?;
                        let d = mats.first().map_or(0, Vec::len);
                        if d == 0 || mats.iter().any(|m| m.len() != d) {
                            return Err(parse_err(e.line, "elements must be square matrices of one size"));
                        }
                        GeometryAction::Finite(mats)
                    }
                    other => return Err(parse_err(e.line, format!("unknown action type '{other}'"))),
                });
                b.finish()?;
            }
            ("metric", true) => raw_metric = Some(b),
            ("complex", false) => {
                let id = b.args.clone();
                if complexes.iter().any(|c| c.id == id) {
                    return Err(parse_err(b.line, format!("duplicate complex '{id}'")));
                }
                let source = if let Some(e) = b.take("product") {
                    let text = e.value.atom().map_err(|m| parse_err(e.line, m))?;
                    let (l, r) = text.split_once(" x ").ok_or_else(|| parse_err(e.line, "expected 'product = <a> x <b>'"))?;
                    let (l, r) = (l.trim().to_string(), r.trim().to_string());
                    for f in [&l, &r] {
                        if !complexes.iter().any(|c| &c.id == f) {
                            return Err(parse_err(e.line, format!("product factor '{f}' must be declared earlier")));
                        }
                    }
                    ComplexSource::Product(l, r)
                } else {
                    let e = b.require("vertices")?;
                    let vertices = usize_of(&e.value, e.line)?;
                    let e = b.require("facets")?;
                    let facets = e
                        .value
                        .list()
                        .map_err(|m| parse_err(e.line, m))?
                        .iter()
                        .map(|f| usize_list(f, e.line))
                        .collect::<Result<Vec<_>, _>>()?;
                    if facets.is_empty() || facets.iter().any(Vec::is_empty) {
                        return Err(parse_err(e.line, "facets must be nonempty"));
                    }
                    ComplexSource::Facets { vertices, facets }
                };
                b.finish()?;
                complexes.push(ComplexSpec { id, source });
            }
            ("action", false) => {
                let id = b.args.clone();
                if groups.iter().any(|g| g.id == id) {
                    return Err(parse_err(b.line, format!("duplicate action '{id}'")));
                }
                let e = b.require("group")?;
                let g = e.value.atom().map_err(|m| parse_err(e.line, m))?.to_string();
                let orders = |s: &str| -> Result<Vec<usize>, ScenarioError> {
                    s.split('x')
                        .map(|k| match k.trim().parse::<usize>() {
                            Ok(k) if k >= 1 => Ok(k),
                            _ => Err(parse_err(e.line, format!("bad group order '{k}'"))),
                        })
                        .collect()
                };
                let kind_line = e.line;
                let e = b.require("maps")?;
                let maps =
                    e.value.list().map_err(|m| parse_err(e.line, m))?.iter().map(|p| usize_list(p, e.line)).collect::<Result<Vec<_>, _>>()?;
                let kind = if let Some(k) = g.strip_prefix("cyclic:") {
                    let k = orders(k)?;
                    if k.len() != 1 || maps.len() != 1 {
                        return Err(parse_err(kind_line, "cyclic groups take one order and one generator"));
                    }
                    GroupKind::Cyclic(k[0])
                } else if let Some(k) = g.strip_prefix("product:") {
                    let k = orders(k)?;
                    if k.len() != maps.len() {
                        return Err(parse_err(kind_line, "product groups take one generator per cyclic factor"));
                    }
                    GroupKind::Product(k)
                } else if g == "table" {
                    let e = b.require("table")?;
                    let table = e
                        .value
                        .list()
                        .map_err(|m| parse_err(e.line, m))?
                        .iter()
                        .map(|r| usize_list(r, e.line))
                        .collect::<Result<Vec<_>, _>>()?;
                    GroupKind::Table(table)
                } else {
                    return Err(parse_err(kind_line, format!("unknown group '{g}' (cyclic:<k>, product:<k1>x<k2>, table)")));
                };
                b.finish()?;
                groups.push(GroupSpec { id, kind, maps });
            }
            ("quotient", true) => {
                let e = b.require("complex")?;
                let complex = e.value.atom().map_err(|m| parse_err(e.line, m))?.to_string();
                let e = b.require("action")?;
                let act = e.value.atom().map_err(|m| parse_err(e.line, m))?.to_string();
                let e = b.require("complex_dim_n")?;
                let n = usize_of(&e.value, e.line)?;
                b.finish()?;
                quotient = Some(QuotientSpec { complex, action: act, n });
            }
            ("kahler", true) => {
                let e = b.require("cocycle")?;
                let terms = e
                    .value
                    .list()
                    .map_err(|m| parse_err(e.line, m))?
                    .iter()
                    .map(|t| match t.list().map_err(|m| parse_err(e.line, m))? {
                        [s, c] => Ok((usize_list(s, e.line)?, rational_of(c, e.line)?)),
                        _ => Err(parse_err(e.line, "cocycle terms are [[v0, v1, v2], coefficient]")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                b.finish()?;
                kahler = Some(terms);
            }
            (kind, _) => return Err(parse_err(b.line, format!("unknown block [{kind}{}{}]", if b.args.is_empty() { "" } else { " " }, b.args))),
        }
    }

    let mut changes = Vec::new();
    for mut b in raw_changes {
        let (s, t) = b.args.split_once("->").ok_or_else(|| parse_err(b.line, "expected [change <i> -> <j>]"))?;
        let parse_id = |x: &str| x.trim().parse::<usize>().map_err(|_| parse_err(b.line, format!("bad chart id '{}'", x.trim())));
        let (source, target) = (parse_id(s)?, parse_id(t)?);
        let order_of = |id: usize| {
            charts.iter().find(|c| c.id == id).map(|c| c.order).ok_or_else(|| parse_err(b.line, format!("unknown chart {id}")))
        };
        let order = order_of(source)?.lcm(&order_of(target)?);
        let e = b.require("linear")?;
        let linear = cyclo_matrix(&e.value, order, e.line)?;
        let e = b.require("offset")?;
        let offset = cyclo_vector(&e.value, order, e.line)?;
        let e = b.require("center")?;
        let center = cyclo_vector(&e.value, order, e.line)?;
        let e = b.require("radius")?;
        let radius = rational_of(&e.value, e.line)?;
        b.finish()?;
        changes.push(ChangeSpec { source, target, linear, offset, center, radius });
    }

    let metric = match raw_metric {
        None => None,
        Some(mut b) => {
            let e = b.require("kind")?;
            let kind = match e.value.atom().map_err(|m| parse_err(e.line, m))? {
                "round" => MetricKind::Round,
                "flat" => MetricKind::Flat,
                "custom" => {
                    let d = action.as_ref().map(GeometryAction::real_dim).ok_or_else(|| ScenarioError::MissingSection {
                        section: "action".into(),
                        message: "a custom metric needs the action to fix the dimension".into(),
                    })?;
                    let names = real_coordinate_names(d / 2);
                    let names: Vec<&str> = names.iter().map(String::as_str).collect();
                    let e = b.require("entries")?;
                    let rows = e.value.list().map_err(|m| parse_err(e.line, m))?;
                    if rows.len() != d {
                        return Err(parse_err(e.line, format!("expected {d} rows of metric entries")));
                    }
                    let entries = rows
                        .iter()
                        .map(|r| {
                            let r = r.list().map_err(|m| parse_err(e.line, m))?;
                            if r.len() != d {
                                return Err(parse_err(e.line, format!("expected {d} entries per row")));
                            }
                            r.iter()
                                .map(|x| {
                                    let a = x.atom().map_err(|m| parse_err(e.line, m))?;
                                    parse_poly(a, &names).map_err(|err| parse_err(e.line, format!("bad polynomial '{a}': {err}")))
                                })
                                .collect()
                        })
                        .collect::<Result<Vec<Vec<Poly>>, _>>()?;
                    MetricKind::Custom(entries)
                }
                other => return Err(parse_err(e.line, format!("unknown metric kind '{other}'"))),
            };
            let average = match b.take("average") {
                Some(e) => bool_of(&e.value, e.line)?,
                None => false,
            };
            b.finish()?;
            Some(MetricSpec { kind, average })
        }
    };

    let atlas = (!charts.is_empty()).then_some(AtlasSpec { charts, changes, overlaps, samples: atlas_samples });

    let scenario = Scenario {
        name,
        pipelines,
        atlas,
        seifert,
        action,
        metric,
        taut,
        transverse,
        complexes,
        groups,
        quotient,
        kahler,
    };
    validate(&scenario)?;
    Ok(scenario)
}

fn missing(section: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::MissingSection { section: section.into(), message: message.into() }
}

fn validate(s: &Scenario) -> Result<(), ScenarioError> {
    if s.pipelines.is_empty() {
        return Err(missing("pipelines", "no pipelines requested"));
    }
    if (s.wants(Pipeline::Atlas) || s.wants(Pipeline::Seifert)) && s.atlas.is_none() {
        return Err(missing("chart", "atlas and seifert pipelines need at least one chart"));
    }
    if s.wants(Pipeline::Taut) {
        if s.action.is_none() {
            return Err(missing("action", "the taut pipeline needs a geometry action"));
        }
        if s.metric.is_none() {
            return Err(missing("metric", "the taut pipeline needs a metric"));
        }
    }
    let quotient_needed = [Pipeline::Cohomology, Pipeline::Hlt, Pipeline::Pd].into_iter().any(|p| s.wants(p));
    if quotient_needed {
        let q = s.quotient.as_ref().ok_or_else(|| missing("quotient", "quotient presentation required"))?;
        if s.complex(&q.complex).is_none() {
            return Err(missing("complex", format!("quotient refers to complex '{}'", q.complex)));
        }
        if s.group(&q.action).is_none() {
            return Err(missing("action", format!("quotient refers to action '{}'", q.action)));
        }
    }
    Ok(())
}
