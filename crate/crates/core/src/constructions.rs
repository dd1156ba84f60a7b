//! Named arrangements and frameworks, reproducible from a name and a small
//! parameter map. Entries that need generic coordinates draw them from a
//! seeded generator and certify the intended incidences exactly, retrying
//! with the next seed when a draw is degenerate.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, LinearForm};
use crate::error::{Error, Result};
use crate::exactlin::{Matrix, Rational, SubspaceBasis};
use crate::persp;
use crate::resolution::{self, Classification};
use crate::rigidity::{self, Framework, Graph, Point};

const RETRIES: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Arrangement(Arrangement),
    Framework(Framework),
}

/// Quantities an entry is known to have. Absent fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wprep_nontrivial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generic_matroid: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion_nontrivial: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub double_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b0: Option<BTreeMap<u32, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1: Option<BTreeMap<u32, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b1_top: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regularity: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// Every parameter the construction read, defaults included.
    pub params: BTreeMap<String, String>,
    pub payload: Payload,
    pub expectations: Expectations,
}

impl CorpusEntry {
    /// The arrangement itself, or the lines along the bars of a framework.
    pub fn arrangement(&self) -> Result<Arrangement> {
        match &self.payload {
            Payload::Arrangement(a) => Ok(a.clone()),
            Payload::Framework(f) => rigidity::arrangement_of(f),
        }
    }

    pub fn framework(&self) -> Option<&Framework> {
        match &self.payload {
            Payload::Framework(f) => Some(f),
            Payload::Arrangement(_) => None,
        }
    }

    /// Human-readable label such as `pencil_plus(g=2, k=4, seed=1)`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.name.clone();
        }
        let args: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.name, args.join(", "))
    }
}

/// Observed values next to the expectations they were compared with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub label: String,
    pub observed: Expectations,
    pub mismatches: Vec<String>,
}

impl Evaluation {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

pub const NAMES: &[&str] = &[
    "d3",
    "a3",
    "generic_lines",
    "pencil",
    "near_pencil",
    "pencil_plus",
    "ziegler_conic",
    "ziegler_generic",
    "generic_k33",
    "dixon",
    "kst_dixon",
    "prism",
    "triangle",
    "glue",
    "add_line",
    "ring_of_quads",
    "cube_diagonal",
];

pub fn generate(name: &str, params: &BTreeMap<String, String>) -> Result<CorpusEntry> {
    let mut p = Params::new(params);
    let (payload, expectations) = match name {
        "d3" => d3(),
        "a3" => a3(),
        "generic_lines" => generic_lines(&mut p)?,
        "pencil" => pencil(&mut p)?,
        "near_pencil" => near_pencil(&mut p)?,
        "pencil_plus" => pencil_plus(&mut p)?,
        "ziegler_conic" => ziegler(&mut p, false)?,
        "ziegler_generic" => ziegler(&mut p, true)?,
        "generic_k33" => generic_k33(&mut p)?,
        "dixon" => dixon(&mut p, false)?,
        "kst_dixon" => dixon(&mut p, true)?,
        "prism" => prism(&mut p)?,
        "triangle" => triangle(),
        "glue" => glue(&mut p)?,
        "add_line" => add_line(&mut p)?,
        "ring_of_quads" => ring_of_quads(&mut p)?,
        "cube_diagonal" => cube_diagonal(&mut p)?,
        _ => return Err(Error::UnknownConstruction(name.to_string())),
    };
    Ok(CorpusEntry {
        name: name.to_string(),
        params: p.finish()?,
        payload,
        expectations,
    })
}

/// The regression corpus, in a fixed order.
pub fn corpus() -> Vec<CorpusEntry> {
    let specs: &[(&str, &[(&str, &str)])] = &[
        ("d3", &[]),
        ("a3", &[]),
        ("generic_lines", &[("n", "3")]),
        ("generic_lines", &[("n", "4")]),
        ("generic_lines", &[("n", "6")]),
        ("pencil", &[("k", "4")]),
        ("near_pencil", &[("k", "4")]),
        ("pencil_plus", &[("k", "3"), ("g", "1")]),
        ("pencil_plus", &[("k", "4"), ("g", "1")]),
        ("pencil_plus", &[("k", "5"), ("g", "1")]),
        ("pencil_plus", &[("k", "3"), ("g", "2")]),
        ("pencil_plus", &[("k", "4"), ("g", "2")]),
        ("pencil_plus", &[("k", "5"), ("g", "2")]),
        ("ziegler_conic", &[]),
        ("ziegler_generic", &[]),
        ("generic_k33", &[]),
        ("dixon", &[]),
        ("kst_dixon", &[]),
        ("prism", &[("variant", "generic")]),
        ("prism", &[("variant", "concurrent")]),
        ("triangle", &[]),
        ("glue", &[("m", "1")]),
        ("glue", &[("m", "2")]),
        ("glue", &[("m", "2"), ("perturb", "1")]),
        ("add_line", &[("base", "ziegler_conic")]),
        ("add_line", &[("base", "ziegler_generic")]),
        ("ring_of_quads", &[("variant", "generic")]),
        ("ring_of_quads", &[("variant", "parallel")]),
        ("cube_diagonal", &[("variant", "generic")]),
        ("cube_diagonal", &[("variant", "special")]),
    ];
    specs
        .iter()
        .map(|(name, kv)| {
            let params = kv.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
            generate(name, &params).unwrap_or_else(|e| panic!("corpus entry {name} failed: {e}"))
        })
        .collect()
}

/// Computes every quantity the entry has an expectation for, plus the cheap
/// ones, and lists disagreements.
pub fn evaluate(entry: &CorpusEntry) -> Result<Evaluation> {
    let a = entry.arrangement()?;
    let exp = &entry.expectations;
    let mut obs = Expectations::default();
    let report = persp::wprep_report(&a, 3)?;
    obs.formal = Some(report.dim_nontrivial == 0);
    obs.wprep_nontrivial = Some(report.dim_nontrivial);
    if a.ambient() == 3 {
        let (triple, double) = point_counts(&a);
        obs.triple_points = Some(triple);
        obs.double_points = Some(double);
    }
    if let Some(f) = entry.framework() {
        obs.generic_matroid = Some(rigidity::has_generic_matroid(f)?);
        obs.motion_nontrivial = Some(rigidity::motion_space(f).dim_nontrivial);
    }
    if a.ambient() == 3 && a.is_essential() {
        let t = resolution::betti_table(&a)?;
        obs.b1_top = Some(t.b1_top());
        obs.regularity = Some(t.regularity);
        obs.classification = Some(resolution::classify_table(&t));
        obs.b0 = Some(t.b0);
        obs.b1 = Some(t.b1);
    }

    let mut mismatches = Vec::new();
    macro_rules! cmp {
        ($field:ident) => {
            if let Some(want) = &exp.$field {
                match &obs.$field {
                    Some(got) if got == want => {}
                    got => mismatches.push(format!(
                        "{}: expected {:?}, observed {:?}",
                        stringify!($field),
                        want,
                        got
                    )),
                }
            }
        };
    }
    cmp!(formal);
    cmp!(wprep_nontrivial);
    cmp!(generic_matroid);
    cmp!(motion_nontrivial);
    cmp!(triple_points);
    cmp!(double_points);
    cmp!(b0);
    cmp!(b1);
    cmp!(b1_top);
    cmp!(regularity);
    cmp!(classification);
    Ok(Evaluation {
        label: entry.label(),
        observed: obs,
        mismatches,
    })
}

/// Numbers of rank-2 flats of size exactly 3 and exactly 2.
pub fn point_counts(a: &Arrangement) -> (usize, usize) {
    let flats = a.flats_of_rank(2);
    let count = |s: usize| flats.iter().filter(|x| x.size() == s).count();
    (count(3), count(2))
}

/// Rank of the matrix of quadratic monomials `x^2, xy, y^2, x, y, 1`
/// evaluated at the points; at most 5 exactly when they lie on a conic
/// (for six points).
pub fn conic_rank(points: &[Point]) -> usize {
    let rows: Vec<Vec<Rational>> = points
        .iter()
        .map(|(x, y)| {
            vec![
                x * x,
                x * y,
                y * y,
                x.clone(),
                y.clone(),
                Rational::one(),
            ]
        })
        .collect();
    Matrix::from_rows(6, rows).map(|m| m.rank()).unwrap_or(0)
}

struct Params<'a> {
    given: &'a BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl<'a> Params<'a> {
    fn new(given: &'a BTreeMap<String, String>) -> Self {
        Params {
            given,
            resolved: BTreeMap::new(),
        }
    }

    fn raw(&mut self, key: &str, default: &str) -> String {
        let v = self.given.get(key).cloned().unwrap_or_else(|| default.to_string());
        self.resolved.insert(key.to_string(), v.clone());
        v
    }

    fn int<T: std::str::FromStr>(&mut self, key: &str, default: &str) -> Result<T> {
        let v = self.raw(key, default);
        v.trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{key} = `{v}` is not a valid integer")))
    }

    fn list(&mut self, key: &str, default: &str) -> Result<Vec<Rational>> {
        let v = self.raw(key, default);
        v.split(',')
            .map(|s| {
                s.trim().parse::<Rational>().map_err(|_| {
                    Error::InvalidParameter(format!("{key} = `{v}` is not a list of rationals"))
                })
            })
            .collect()
    }

    fn rational(&mut self, key: &str, default: &str) -> Result<Rational> {
        let v = self.raw(key, default);
        v.trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{key} = `{v}` is not a rational")))
    }

    /// A vertex pair written `i-j`.
    fn pair(&mut self, key: &str, default: &str) -> Result<(usize, usize)> {
        let v = self.raw(key, default);
        let bad = || Error::InvalidParameter(format!("{key} = `{v}` is not a pair `i-j`"));
        let (a, b) = v.split_once('-').ok_or_else(bad)?;
        Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    }

    fn choice(&mut self, key: &str, default: &str, allowed: &[&str]) -> Result<String> {
        let v = self.raw(key, default);
        if !allowed.contains(&v.as_str()) {
            return Err(Error::InvalidParameter(format!(
                "{key} = `{v}`, expected one of {}",
                allowed.join(", ")
            )));
        }
        Ok(v)
    }

    fn finish(self) -> Result<BTreeMap<String, String>> {
        if let Some(k) = self.given.keys().find(|k| !self.resolved.contains_key(*k)) {
            return Err(Error::InvalidParameter(format!("unknown parameter `{k}`")));
        }
        Ok(self.resolved)
    }
}

type Built = (Payload, Expectations);

fn ints(rows: &[&[i64]]) -> Arrangement {
    Arrangement::from_int_rows(3, rows).expect("fixed forms are valid")
}

fn map(pairs: &[(u32, usize)]) -> BTreeMap<u32, usize> {
    pairs.iter().copied().collect()
}

fn table(b0: &[(u32, usize)], b1: &[(u32, usize)]) -> Expectations {
    let t = resolution::BettiTable {
        n: 0,
        b0: map(b0),
        b1: map(b1),
        regularity: 0,
    };
    Expectations {
        b0: Some(map(b0)),
        b1: Some(map(b1)),
        classification: Some(resolution::classify_table(&t)),
        ..Default::default()
    }
}

fn free(d1: u32, d2: u32) -> Expectations {
    if d1 == d2 {
        table(&[(d1, 2)], &[])
    } else {
        table(&[(d1, 1), (d2, 1)], &[])
    }
}

fn d3() -> Built {
    let a = ints(&[
        &[1, -1, 0],
        &[1, 1, 0],
        &[1, 0, -1],
        &[1, 0, 1],
        &[0, 1, -1],
        &[0, 1, 1],
    ]);
    let exp = Expectations {
        formal: Some(true),
        wprep_nontrivial: Some(0),
        triple_points: Some(4),
        double_points: Some(3),
        b1_top: Some(0),
        regularity: Some(3),
        ..free(2, 3)
    };
    (Payload::Arrangement(a), exp)
}

fn a3() -> Built {
    let a = ints(&[
        &[1, 0, 0],
        &[0, 1, 0],
        &[0, 0, 1],
        &[1, -1, 0],
        &[1, 0, -1],
        &[0, 1, -1],
    ]);
    let exp = Expectations {
        formal: Some(true),
        wprep_nontrivial: Some(0),
        triple_points: Some(4),
        double_points: Some(3),
        regularity: Some(3),
        ..free(2, 3)
    };
    (Payload::Arrangement(a), exp)
}

fn rng(seed: u64, attempt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(attempt))
}

fn random_form(r: &mut ChaCha8Rng, bound: i64) -> Option<LinearForm> {
    let c: Vec<i64> = (0..3).map(|_| r.gen_range(-bound..=bound)).collect();
    LinearForm::from_ints(&c).ok()
}

/// Whether every rank-2 flat has two forms, except those listed with their
/// required size.
fn only_points(a: &Arrangement, special: &[(Vec<usize>, usize)]) -> bool {
    a.flats_of_rank(2).iter().all(|x| {
        match special.iter().find(|(ix, _)| ix.iter().all(|i| x.contains(*i))) {
            Some((_, s)) => x.size() == *s,
            None => x.size() == 2,
        }
    })
}

fn generic_lines(p: &mut Params) -> Result<Built> {
    let n: usize = p.int("n", "5")?;
    let seed: u64 = p.int("seed", "1")?;
    if n < 3 {
        return Err(Error::InvalidParameter(format!("generic_lines needs n >= 3, got {n}")));
    }
    for attempt in 0..RETRIES {
        let mut r = rng(seed, attempt);
        let forms: Vec<LinearForm> = (0..n).filter_map(|_| random_form(&mut r, 9)).collect();
        let Ok(a) = Arrangement::from_forms(3, forms) else { continue };
        if a.len() != n || !a.is_essential() || !only_points(&a, &[]) {
            continue;
        }
        let n32 = n as u32;
        let shape = if n == 3 {
            free(1, 1)
        } else {
            table(&[(n32 - 2, n - 1)], &[(n32 - 1, n - 3)])
        };
        let exp = Expectations {
            formal: Some(n == 3),
            wprep_nontrivial: Some(n - 3),
            triple_points: Some(0),
            double_points: Some(n * (n - 1) / 2),
            b1_top: Some(n - 3),
            ..shape
        };
        return Ok((Payload::Arrangement(a), exp));
    }
    Err(retries_exhausted("generic_lines"))
}

fn retries_exhausted(name: &str) -> Error {
    Error::InvalidParameter(format!("{name}: no admissible configuration within {RETRIES} draws"))
}

/// `x, y, x + y, x + 2y, ...`, all through `[0:0:1]`.
fn pencil_forms(k: usize) -> Vec<LinearForm> {
    (0..k)
        .map(|i| match i {
            0 => LinearForm::from_ints(&[1, 0, 0]),
            1 => LinearForm::from_ints(&[0, 1, 0]),
            _ => LinearForm::from_ints(&[1, i as i64 - 1, 0]),
        })
        .collect::<Result<_>>()
        .expect("pencil forms are nonzero")
}

fn pencil(p: &mut Params) -> Result<Built> {
    let k: usize = p.int("k", "4")?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("pencil needs k >= 2, got {k}")));
    }
    let a = Arrangement::from_forms(3, pencil_forms(k))?;
    let exp = Expectations {
        formal: Some(true),
        wprep_nontrivial: Some(0),
        ..Default::default()
    };
    Ok((Payload::Arrangement(a), exp))
}

fn near_pencil(p: &mut Params) -> Result<Built> {
    let k: usize = p.int("k", "4")?;
    if k < 2 {
        return Err(Error::InvalidParameter(format!("near_pencil needs k >= 2, got {k}")));
    }
    let mut forms = pencil_forms(k);
    forms.push(LinearForm::from_ints(&[0, 0, 1])?);
    let a = Arrangement::from_forms(3, forms)?;
    let exp = Expectations {
        formal: Some(true),
        wprep_nontrivial: Some(0),
        b1_top: Some(0),
        ..free(1, k as u32 - 1)
    };
    Ok((Payload::Arrangement(a), exp))
}

fn pencil_plus(p: &mut Params) -> Result<Built> {
    let k: usize = p.int("k", "3")?;
    let g: usize = p.int("g", "2")?;
    let seed: u64 = p.int("seed", "1")?;
    if k < 3 || !(1..=2).contains(&g) {
        return Err(Error::InvalidParameter(format!(
            "pencil_plus needs k >= 3 and g in 1..=2, got k = {k}, g = {g}"
        )));
    }
    let center: Vec<usize> = (0..k).collect();
    for attempt in 0..RETRIES {
        let mut r = rng(seed, attempt);
        let mut forms = pencil_forms(k);
        forms.extend((0..g).filter_map(|_| random_form(&mut r, 9)));
        let Ok(a) = Arrangement::from_forms(3, forms) else { continue };
        if a.len() != k + g || !only_points(&a, &[(center.clone(), k)]) {
            continue;
        }
        let k32 = k as u32;
        let exp = if g == 1 {
            Expectations {
                formal: Some(true),
                wprep_nontrivial: Some(0),
                b1_top: Some(0),
                ..free(1, k32 - 1)
            }
        } else {
            Expectations {
                formal: Some(false),
                wprep_nontrivial: Some(1),
                b1_top: Some(1),
                regularity: Some(k32),
                ..table(&[(2, 1), (k32, 2)], &[(k32 + 1, 1)])
            }
        };
        return Ok((Payload::Arrangement(a), exp));
    }
    Err(retries_exhausted("pencil_plus"))
}

fn k_graph(s: usize, t: usize) -> Graph {
    let edges = (0..s).flat_map(|i| (s..s + t).map(move |j| (i, j))).collect();
    Graph::new(s + t, edges).expect("complete bipartite graph is valid")
}

/// Verifies the generic matroid and returns the framework.
fn certified(graph: Graph, placement: Vec<Point>) -> Option<Framework> {
    let f = Framework::new(graph, placement).ok()?;
    match rigidity::has_generic_matroid(&f) {
        Ok(true) => Some(f),
        _ => None,
    }
}

fn k33_expectations(conic: bool) -> Expectations {
    if conic {
        Expectations {
            formal: Some(false),
            wprep_nontrivial: Some(1),
            generic_matroid: Some(true),
            motion_nontrivial: Some(1),
            triple_points: Some(6),
            double_points: Some(18),
            b1_top: Some(1),
            regularity: Some(7),
            ..Default::default()
        }
    } else {
        Expectations {
            formal: Some(true),
            wprep_nontrivial: Some(0),
            generic_matroid: Some(true),
            motion_nontrivial: Some(0),
            triple_points: Some(6),
            double_points: Some(18),
            b1_top: Some(0),
            regularity: Some(6),
            ..table(&[(6, 6)], &[(7, 4)])
        }
    }
}

/// Vertices `(t, t^2)` on the parabola, the first three forming one class.
fn ziegler(p: &mut Params, perturbed: bool) -> Result<Built> {
    let t = p.list("t", "1,2,4,-1,-3,-7")?;
    let shift = if perturbed { Some(p.rational("shift", "1")?) } else { None };
    if t.len() != 6 {
        return Err(Error::InvalidParameter(format!("t needs 6 values, got {}", t.len())));
    }
    if t.iter().collect::<BTreeSet<_>>().len() != 6 {
        return Err(Error::InvalidParameter("t values must be pairwise distinct".into()));
    }
    let mut pts: Vec<Point> = t.iter().map(|x| (x.clone(), x * x)).collect();
    if let Some(s) = &shift {
        if s.is_zero() {
            return Err(Error::InvalidParameter("shift must be nonzero".into()));
        }
        pts[5].1 += s;
    }
    let rank = conic_rank(&pts);
    if perturbed && rank != 6 {
        return Err(Error::InvalidParameter("perturbed vertices still lie on a conic".into()));
    }
    let f = Framework::new(k_graph(3, 3), pts)?;
    let a = rigidity::arrangement_of(&f)?;
    if point_counts(&a) != (6, 18) || a.flats_of_rank(2).len() != 24 {
        return Err(Error::InvalidParameter(
            "vertices produce concurrences beyond the six triple points".into(),
        ));
    }
    Ok((Payload::Framework(f), k33_expectations(!perturbed)))
}

fn random_point(r: &mut ChaCha8Rng, bound: i64) -> Point {
    rigidity::point(r.gen_range(-bound..=bound), r.gen_range(-bound..=bound))
}

fn generic_k33(p: &mut Params) -> Result<Built> {
    let seed: u64 = p.int("seed", "7")?;
    for attempt in 0..RETRIES {
        let mut r = rng(seed, attempt);
        let pts: Vec<Point> = (0..6).map(|_| random_point(&mut r, 20)).collect();
        if conic_rank(&pts) != 6 {
            continue;
        }
        if let Some(f) = certified(k_graph(3, 3), pts) {
            return Ok((Payload::Framework(f), k33_expectations(false)));
        }
    }
    Err(retries_exhausted("generic_k33"))
}

/// One class on the x-axis at `xs`, the other on the y-axis at `ys`.
fn dixon_framework(xs: &[Rational], ys: &[Rational]) -> Result<Framework> {
    if xs.len() < 3 || ys.len() < 3 {
        return Err(Error::InvalidParameter("each class needs at least 3 vertices".into()));
    }
    for v in xs.iter().chain(ys) {
        if v.is_zero() {
            return Err(Error::InvalidParameter("vertices must avoid the origin".into()));
        }
    }
    let mut slopes = BTreeSet::new();
    for x in xs {
        for y in ys {
            let slope = -(y / x);
            if !slopes.insert(slope) {
                return Err(Error::InvalidParameter(format!(
                    "slopes -y/x repeat (at x = {x}, y = {y})"
                )));
            }
        }
    }
    let pts: Vec<Point> = xs
        .iter()
        .map(|x| (x.clone(), Rational::zero()))
        .chain(ys.iter().map(|y| (Rational::zero(), y.clone())))
        .collect();
    Framework::new(k_graph(xs.len(), ys.len()), pts)
}

fn dixon(p: &mut Params, kst: bool) -> Result<Built> {
    let (xs, ys) = if kst {
        let s: usize = p.int("s", "3")?;
        let t: usize = p.int("t", "4")?;
        let xs: Vec<String> = [1, 2, 5, 7, 11, 13].iter().take(s).map(|v| v.to_string()).collect();
        let ys: Vec<String> = [1, 3, 9, 27, 81, 243].iter().take(t).map(|v| v.to_string()).collect();
        let xs = p.list("xs", &xs.join(","))?;
        let ys = p.list("ys", &ys.join(","))?;
        if xs.len() != s || ys.len() != t {
            return Err(Error::InvalidParameter(format!(
                "expected {s} x-values and {t} y-values, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        (xs, ys)
    } else {
        (p.list("xs", "1,2,5")?, p.list("ys", "1,3,9")?)
    };
    let f = dixon_framework(&xs, &ys)?;
    let mut exp = Expectations {
        formal: Some(false),
        generic_matroid: Some(true),
        ..Default::default()
    };
    if xs.len() == 3 && ys.len() == 3 {
        exp = Expectations {
            wprep_nontrivial: Some(1),
            motion_nontrivial: Some(1),
            b1_top: Some(1),
            regularity: Some(7),
            ..exp
        };
    }
    Ok((Payload::Framework(f), exp))
}

fn prism(p: &mut Params) -> Result<Built> {
    let variant = p.choice("variant", "generic", &["generic", "concurrent"])?;
    let graph = Graph::new(
        6,
        vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
    )?;
    let pt = rigidity::point;
    let (pts, exp) = if variant == "generic" {
        let pts = vec![pt(-26, 30), pt(-20, 10), pt(-12, 23), pt(7, 30), pt(-3, 5), pt(-6, 15)];
        let exp = Expectations {
            formal: Some(true),
            wprep_nontrivial: Some(0),
            generic_matroid: Some(true),
            motion_nontrivial: Some(0),
            ..Default::default()
        };
        (pts, exp)
    } else {
        // connecting bars all pass through the origin
        let pts = vec![pt(2, 1), pt(-1, 3), pt(-2, -3), pt(6, 3), pt(-2, 6), pt(-10, -15)];
        let exp = Expectations {
            generic_matroid: Some(false),
            motion_nontrivial: Some(1),
            ..Default::default()
        };
        (pts, exp)
    };
    Ok((Payload::Framework(Framework::new(graph, pts)?), exp))
}

fn triangle() -> Built {
    let graph = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).expect("triangle is valid");
    let pt = rigidity::point;
    let f = Framework::new(graph, vec![pt(0, 0), pt(3, 1), pt(1, 4)]).expect("distinct vertices");
    let exp = Expectations {
        formal: Some(true),
        wprep_nontrivial: Some(0),
        generic_matroid: Some(true),
        motion_nontrivial: Some(0),
        ..free(1, 1)
    };
    (Payload::Framework(f), exp)
}

/// The similarity `z -> a z + b` of the plane, read as complex numbers,
/// sending `p0 -> q0` and `p1 -> q1`.
fn similarity(p0: &Point, p1: &Point, q0: &Point, q1: &Point) -> impl Fn(&Point) -> Point {
    let (dr, di) = (&p1.0 - &p0.0, &p1.1 - &p0.1);
    let (er, ei) = (&q1.0 - &q0.0, &q1.1 - &q0.1);
    let norm = &(&dr * &dr) + &(&di * &di);
    let ar = &(&(&er * &dr) + &(&ei * &di)) / &norm;
    let ai = &(&(&ei * &dr) - &(&er * &di)) / &norm;
    let (p0, q0) = (p0.clone(), q0.clone());
    move |z: &Point| {
        let (zr, zi) = (&z.0 - &p0.0, &z.1 - &p0.1);
        (
            &(&(&ar * &zr) - &(&ai * &zi)) + &q0.0,
            &(&(&ar * &zi) + &(&ai * &zr)) + &q0.1,
        )
    }
}

/// `m` copies of Dixon's K_{3,3} glued in a chain: local edge `(1, 4)` of
/// each copy is identified with local edge `(0, 3)` of the next.
fn glue(p: &mut Params) -> Result<Built> {
    let m: usize = p.int("m", "2")?;
    let seed: u64 = p.int("seed", "1")?;
    let perturb_raw = p.raw("perturb", "none");
    let perturb: Option<usize> = match perturb_raw.as_str() {
        "none" => None,
        s => Some(s.parse().map_err(|_| {
            Error::InvalidParameter(format!("perturb = `{s}` is neither `none` nor a copy index"))
        })?),
    };
    if m == 0 {
        return Err(Error::InvalidParameter("glue needs m >= 1".into()));
    }
    if let Some(c) = perturb {
        if c >= m {
            return Err(Error::InvalidParameter(format!("perturb = {c} but only {m} copies")));
        }
    }
    let nonzero = |r: &mut ChaCha8Rng| loop {
        let v: i64 = r.gen_range(-12..=12);
        if v != 0 {
            return Rational::from_int(v);
        }
    };
    'attempt: for attempt in 0..RETRIES {
        let mut r = rng(seed, attempt);
        let mut placement: Vec<Point> = Vec::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        // global index of the local vertices 1 and 4 of the previous copy
        let mut previous: Option<(usize, usize)> = None;
        for copy in 0..m {
            let xs: Vec<Rational> = (0..3).map(|_| nonzero(&mut r)).collect();
            let ys: Vec<Rational> = (0..3).map(|_| nonzero(&mut r)).collect();
            let Ok(local) = dixon_framework(&xs, &ys) else { continue 'attempt };
            let mut pts = local.placement().to_vec();
            if perturb == Some(copy) {
                // vertex 5 sits on the y-axis; push it off
                pts[5].0 = Rational::new(1, 3);
            }
            let mut global = [0usize; 6];
            match previous {
                None => {
                    for (i, q) in pts.iter().enumerate() {
                        global[i] = placement.len();
                        placement.push(q.clone());
                    }
                }
                Some((u, v)) => {
                    let map = similarity(&pts[0], &pts[3], &placement[u], &placement[v]);
                    for (i, q) in pts.iter().enumerate() {
                        global[i] = match i {
                            0 => u,
                            3 => v,
                            _ => {
                                placement.push(map(q));
                                placement.len() - 1
                            }
                        };
                    }
                }
            }
            for &(i, j) in local.graph().edges() {
                let e = (global[i], global[j]);
                if previous.is_some() && (i, j) == (0, 3) {
                    continue;
                }
                edges.push(e);
            }
            previous = Some((global[1], global[4]));
        }
        let Ok(graph) = Graph::new(placement.len(), edges) else { continue };
        if let Some(f) = certified(graph, placement) {
            let flex = m - usize::from(perturb.is_some());
            let exp = Expectations {
                formal: Some(flex == 0),
                wprep_nontrivial: Some(flex),
                generic_matroid: Some(true),
                motion_nontrivial: Some(flex),
                b1_top: Some(flex),
                ..Default::default()
            };
            return Ok((Payload::Framework(f), exp));
        }
    }
    Err(retries_exhausted("glue"))
}

/// Adds to a base entry one line through the chosen intersection point,
/// avoiding every other intersection point.
fn add_line(p: &mut Params) -> Result<Built> {
    let base = p.choice(
        "base",
        "ziegler_conic",
        &["ziegler_conic", "ziegler_generic", "generic_k33", "dixon", "generic_lines"],
    )?;
    let point: usize = p.int("point", "0")?;
    let entry = generate(&base, &BTreeMap::new())?;
    let a = entry.arrangement()?;
    let flats = a.flats_of_rank(2);
    let Some(x) = flats.get(point) else {
        return Err(Error::InvalidParameter(format!(
            "point = {point} but the base has {} intersection points",
            flats.len()
        )));
    };
    let pencil = a.flat_kernel(x).annihilator().vectors();
    for c in 1..=(4 * a.len() as i64 + 8) {
        let coeffs: Vec<Rational> = pencil[0]
            .iter()
            .zip(&pencil[1])
            .map(|(u, v)| u + &(v * &Rational::from_int(c)))
            .collect();
        let h = LinearForm::new(coeffs)?;
        if a.forms().contains(&h) {
            continue;
        }
        let avoids = flats
            .iter()
            .enumerate()
            .all(|(i, y)| i == point || !a.form_contains_flat(&h, y));
        if !avoids {
            continue;
        }
        let b = a.with_form(h)?;
        let exp = Expectations {
            wprep_nontrivial: entry.expectations.wprep_nontrivial,
            formal: entry.expectations.formal,
            b1_top: entry.expectations.b1_top,
            ..Default::default()
        };
        return Ok((Payload::Arrangement(b), exp));
    }
    Err(Error::InvalidParameter("no admissible line through the chosen point".into()))
}

/// The cube graph as a ring of four quadrilaterals around a central square:
/// inner `a_1..a_4` are vertices `0..4`, outer `b_1..b_4` are `4..8`.
fn cube_graph(extra: Option<(usize, usize)>) -> Graph {
    let mut edges = Vec::new();
    for i in 0..4 {
        edges.push((i, (i + 1) % 4));
    }
    for i in 0..4 {
        edges.push((4 + i, 4 + (i + 1) % 4));
    }
    for i in 0..4 {
        edges.push((i, 4 + i));
    }
    edges.extend(extra);
    Graph::new(8, edges).expect("cube graph is valid")
}

fn ring_of_quads(p: &mut Params) -> Result<Built> {
    let variant = p.choice("variant", "generic", &["generic", "parallel"])?;
    let seed: u64 = p.int("seed", "3")?;
    for attempt in 0..RETRIES {
        let mut r = rng(seed, attempt);
        let a: Vec<Point> = (0..4).map(|_| random_point(&mut r, 12)).collect();
        let b: Vec<Point> = if variant == "generic" {
            (0..4).map(|_| random_point(&mut r, 12)).collect()
        } else {
            match parallel_ring(&a, &mut r) {
                Some(b) => b,
                None => continue,
            }
        };
        let pts: Vec<Point> = a.into_iter().chain(b).collect();
        if let Some(f) = certified(cube_graph(None), pts) {
            let exp = if variant == "generic" {
                Expectations {
                    formal: Some(false),
                    wprep_nontrivial: Some(1),
                    generic_matroid: Some(true),
                    motion_nontrivial: Some(1),
                    b1_top: Some(1),
                    ..table(&[(9, 8)], &[(10, 5), (11, 1)])
                }
            } else {
                Expectations {
                    formal: Some(false),
                    wprep_nontrivial: Some(2),
                    generic_matroid: Some(true),
                    motion_nontrivial: Some(2),
                    b1_top: Some(2),
                    ..table(&[(8, 1), (9, 5)], &[(10, 2), (11, 2)])
                }
            };
            return Ok((Payload::Framework(f), exp));
        }
    }
    Err(retries_exhausted("ring_of_quads"))
}

/// An outer quadrilateral with `b_i b_{i+1}` parallel to `a_i a_{i+1}` for
/// every side, not a homothetic copy of the inner one.
fn parallel_ring(a: &[Point], r: &mut ChaCha8Rng) -> Option<Vec<Point>> {
    let d: Vec<Point> = (0..4)
        .map(|i| {
            let (p, q) = (&a[i], &a[(i + 1) % 4]);
            (&q.0 - &p.0, &q.1 - &p.1)
        })
        .collect();
    // sum c_i d_i = 0 over the first three sides
    let m = Matrix::from_rows(
        3,
        vec![
            d[..3].iter().map(|v| v.0.clone()).collect(),
            d[..3].iter().map(|v| v.1.clone()).collect(),
        ],
    )
    .ok()?;
    let kernel = m.kernel_basis();
    if kernel.dim() != 1 {
        return None;
    }
    let c = &kernel.rows()[0];
    let t4 = Rational::from_int(r.gen_range(2..=5));
    let s = Rational::new(r.gen_range(1..=4), 3);
    let mut b = vec![random_point(r, 12)];
    for i in 0..3 {
        let t = &t4 + &(&s * &c[i]);
        if t.is_zero() {
            return None;
        }
        let prev = &b[i];
        b.push((&prev.0 + &(&t * &d[i].0), &prev.1 + &(&t * &d[i].1)));
    }
    Some(b)
}

/// Intersection of the lines `pq` and `rs`, if they are not parallel.
fn meet(p: &Point, q: &Point, r: &Point, s: &Point) -> Option<Point> {
    let l1 = rigidity::line_through(p, q).ok()?;
    let l2 = rigidity::line_through(r, s).ok()?;
    let m = Matrix::from_rows(3, vec![l1.coefficients().to_vec(), l2.coefficients().to_vec()]).ok()?;
    let k: SubspaceBasis = m.kernel_basis();
    let v = &k.rows()[0];
    if v[2].is_zero() {
        return None;
    }
    Some((&v[0] / &v[2], &v[1] / &v[2]))
}

/// The cube graph braced by a diagonal, by default `b_1 b_3` of the outer
/// square. The special variant moves `b_4` along its spoke so that `a_1 b_1 ∩ a_2 b_2`,
/// `a_3 b_3 ∩ a_4 b_4` and `a_1 a_4 ∩ a_2 a_3` are collinear.
fn cube_diagonal(p: &mut Params) -> Result<Built> {
    let variant = p.choice("variant", "generic", &["generic", "special"])?;
    let seed: u64 = p.int("seed", "5")?;
    let diagonal = p.pair("diagonal", "4-6")?;
    let base = cube_graph(None);
    if diagonal.0 >= 8 || diagonal.1 >= 8 || diagonal.0 == diagonal.1 {
        return Err(Error::InvalidParameter(format!("diagonal {diagonal:?} is not a vertex pair")));
    }
    if base.edges().iter().any(|&(i, j)| (i, j) == diagonal || (j, i) == diagonal) {
        return Err(Error::InvalidParameter(format!("diagonal {diagonal:?} is already an edge")));
    }
    for attempt in 0..RETRIES {
        let mut r = rng(seed, attempt);
        let mut pts: Vec<Point> = (0..8).map(|_| random_point(&mut r, 12)).collect();
        if variant == "special" {
            let (a, b) = (&pts[..4], &pts[4..]);
            let Some(pa) = meet(&a[0], &b[0], &a[1], &b[1]) else { continue };
            let Some(pc) = meet(&a[0], &a[3], &a[1], &a[2]) else { continue };
            // the new B on the spoke a_3 b_3, then b_4 on the line a_4 B
            let Some(pb) = meet(&pa, &pc, &a[2], &b[2]) else { continue };
            let s = Rational::new(r.gen_range(2..=5), r.gen_range(1..=3));
            let a4 = pts[3].clone();
            pts[7] = (&a4.0 + &(&s * &(&pb.0 - &a4.0)), &a4.1 + &(&s * &(&pb.1 - &a4.1)));
        }
        if let Some(f) = certified(cube_graph(Some(diagonal)), pts) {
            let exp = if variant == "generic" {
                Expectations {
                    formal: Some(true),
                    wprep_nontrivial: Some(0),
                    generic_matroid: Some(true),
                    motion_nontrivial: Some(0),
                    b1_top: Some(0),
                    ..table(&[(9, 2), (10, 6)], &[(11, 6)])
                }
            } else {
                Expectations {
                    formal: Some(false),
                    wprep_nontrivial: Some(1),
                    generic_matroid: Some(true),
                    motion_nontrivial: Some(1),
                    b1_top: Some(1),
                    ..table(&[(9, 3), (10, 3)], &[(11, 3), (12, 1)])
                }
            };
            return Ok((Payload::Framework(f), exp));
        }
    }
    Err(retries_exhausted("cube_diagonal"))
}
