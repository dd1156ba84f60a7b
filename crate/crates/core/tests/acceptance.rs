//! Acceptance run over the regression corpus: one line per criterion.
//! Built with `harness = false` so the summary is always printed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;

use arrform::arrangement::Arrangement;
use arrform::constructions::{self, CorpusEntry};
use arrform::persp::{self, WPRepReport};
use arrform::polyjac;
use arrform::resolution::{self, BettiTable, Classification, Resolution};
use arrform::rigidity;

struct Computed {
    entry: CorpusEntry,
    arrangement: Arrangement,
    wprep: WPRepReport,
    /// Present for essential line arrangements.
    resolution: Option<Resolution>,
}

impl Computed {
    fn new(entry: CorpusEntry) -> Self {
        let arrangement = entry.arrangement().unwrap();
        let wprep = persp::wprep_report(&arrangement, 3).unwrap();
        let resolution = (arrangement.ambient() == 3 && arrangement.is_essential())
            .then(|| resolution::resolve(&arrangement).unwrap());
        Computed {
            entry,
            arrangement,
            wprep,
            resolution,
        }
    }

    fn label(&self) -> String {
        self.entry.label()
    }

    fn n(&self) -> u32 {
        self.arrangement.len() as u32
    }

    fn table(&self) -> &BettiTable {
        &self.resolution.as_ref().expect("essential line arrangement").table
    }

    fn formal(&self) -> bool {
        self.wprep.dim_nontrivial == 0
    }

    fn param(&self, key: &str) -> Option<&str> {
        self.entry.params.get(key).map(String::as_str)
    }
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn find<'a>(corpus: &'a [Computed], name: &str, params: &[(&str, &str)]) -> Result<&'a Computed, String> {
    corpus
        .iter()
        .find(|c| c.entry.name == name && params.iter().all(|(k, v)| c.param(k) == Some(v)))
        .ok_or_else(|| format!("corpus has no entry {name} {params:?}"))
}

fn with_tables(corpus: &[Computed]) -> impl Iterator<Item = &Computed> {
    corpus.iter().filter(|c| c.resolution.is_some())
}

fn d3_formality(corpus: &[Computed]) -> Outcome {
    let c = find(corpus, "d3", &[])?;
    let a = &c.arrangement;
    let m = a.coefficient_matrix().rank();
    let nrank = a.relation_matrix(3).map_err(|e| e.to_string())?.rank();
    ensure(m == 3, || format!("rank M = {m}"))?;
    ensure(nrank == 3, || format!("rank N = {nrank}"))?;
    ensure(c.wprep.dim_nontrivial == 0, || {
        format!("nontrivial dimension {}", c.wprep.dim_nontrivial)
    })?;
    ensure(persp::is_formal(a).unwrap(), || "formality verdict false".into())?;
    Ok("rank M = 3, rank N = 3, nontrivial 0, formal".into())
}

fn a3_freeness(corpus: &[Computed]) -> Outcome {
    let c = find(corpus, "a3", &[])?;
    let t = c.table();
    ensure(t.b0 == [(2, 1), (3, 1)].into(), || format!("generators {:?}", t.b0))?;
    ensure(t.b1.is_empty(), || format!("relations {:?}", t.b1))?;
    let class = resolution::classify_table(t);
    ensure(class == Classification::Free { d1: 2, d2: 3 }, || format!("{class:?}"))?;
    let dual = resolution::duality_check_with(&c.arrangement, t).map_err(|e| e.to_string())?;
    ensure(dual.d0_b1.values().all(|&v| v == 0), || format!("D0 side {:?}", dual.d0_b1))?;
    ensure(dual.sat_b0.values().all(|&v| v == 0), || format!("saturation side {:?}", dual.sat_b0))?;
    ensure(dual.sat_dims.values().all(|&v| v == 0), || format!("J^sat/J {:?}", dual.sat_dims))?;
    ensure(dual.agree, || "duality report disagrees".into())?;
    Ok("generators {2:1, 3:1}, no relations, free(2,3), both duality sides empty".into())
}

fn ziegler_pair(corpus: &[Computed]) -> Outcome {
    let g = find(corpus, "ziegler_generic", &[])?;
    let t = g.table();
    ensure(t.rows().contains(&(6, 6, 4)), || format!("generic rows {:?}", t.rows()))?;
    ensure(t.regularity == 6, || format!("generic regularity {}", t.regularity))?;
    ensure(g.formal(), || "generic entry not formal".into())?;

    let c = find(corpus, "ziegler_conic", &[])?;
    let t = c.table();
    let n = c.n();
    let b18 = t.b1.get(&8).copied().unwrap_or(0);
    ensure(b18 == 1, || format!("conic b_1,8 = {b18}"))?;
    ensure(t.regularity == 7 && t.regularity == n - 2, || {
        format!("conic regularity {}", t.regularity)
    })?;
    ensure(!c.formal(), || "conic entry formal".into())?;
    let sat = polyjac::sat_quotient_dim(&c.arrangement, 2, n - 1).map_err(|e| e.to_string())?;
    ensure(sat == 1 && c.wprep.dim_nontrivial == 1, || {
        format!("conic saturation {sat}, wprep {}", c.wprep.dim_nontrivial)
    })?;
    Ok("generic row 6 = (6,4), reg 6, formal; conic b_1,8 = 1, reg 7, not formal, triple check 1 = 1 = 1".into())
}

fn central_triangle(corpus: &[Computed]) -> Outcome {
    let mut count = 0;
    let mut nonzero = Vec::new();
    for c in with_tables(corpus) {
        let top = c.table().b1_top();
        let sat = polyjac::sat_quotient_dim(&c.arrangement, 2, c.n() - 1).map_err(|e| e.to_string())?;
        let wp = c.wprep.dim_nontrivial;
        ensure(top == sat && sat == wp, || {
            format!("{}: b_1,n-1 = {top}, saturation {sat}, wprep {wp}", c.label())
        })?;
        count += 1;
        if top > 0 {
            nonzero.push(top);
        }
    }
    ensure(count >= 18, || format!("only {count} instances"))?;
    Ok(format!(
        "{count} arrangements agree, {} with a nonzero common value {:?}",
        nonzero.len(),
        nonzero
    ))
}

fn rigidity_correspondence(corpus: &[Computed]) -> Outcome {
    let mut count = 0;
    for c in corpus {
        let Some(f) = c.entry.framework() else { continue };
        if !rigidity::has_generic_matroid(f).map_err(|e| e.to_string())? {
            continue;
        }
        let r = rigidity::correspondence_check(f).map_err(|e| e.to_string())?;
        ensure(r.agree && r.wprep_nontrivial == c.wprep.dim_nontrivial, || {
            format!("{}: motion {}, wprep {}", c.label(), r.motion_nontrivial, r.wprep_nontrivial)
        })?;
        count += 1;
    }
    let motion = |name: &str, want: &dyn Fn(usize) -> bool| -> Result<usize, String> {
        let c = find(corpus, name, &[])?;
        let f = c.entry.framework().ok_or_else(|| format!("{name} is not a framework"))?;
        ensure(rigidity::has_generic_matroid(f).unwrap(), || format!("{name} lacks the generic matroid"))?;
        let m = rigidity::motion_space(f).dim_nontrivial;
        ensure(want(m) && m == c.wprep.dim_nontrivial, || format!("{name}: motion {m}"))?;
        Ok(m)
    };
    let dixon = motion("dixon", &|m| m == 1)?;
    let kst = motion("kst_dixon", &|m| m >= 1)?;
    let k33 = motion("generic_k33", &|m| m == 0)?;
    let tri = motion("triangle", &|m| m == 0)?;
    Ok(format!(
        "{count} frameworks agree; dixon K33 {dixon}, dixon K34 {kst}, generic K33 {k33}, triangle {tri}"
    ))
}

fn regularity_bounds(corpus: &[Computed]) -> Outcome {
    let mut irreducible = 0;
    let mut count = 0;
    for c in with_tables(corpus) {
        let t = c.table();
        let n = c.n();
        ensure(t.regularity <= n - 2, || format!("{}: regularity {}", c.label(), t.regularity))?;
        let top = t.b1.keys().max().copied().unwrap_or(0);
        ensure(top <= n - 1, || format!("{}: syzygy in degree {top}", c.label()))?;
        count += 1;
        if c.arrangement.is_irreducible_line_arrangement().map_err(|e| e.to_string())? {
            irreducible += 1;
            ensure((t.regularity == n - 2) == !c.formal(), || {
                format!("{}: regularity {} but formal = {}", c.label(), t.regularity, c.formal())
            })?;
        }
    }
    Ok(format!("{count} tables within bounds, characterization holds on {irreducible} irreducible entries"))
}

fn gluing(corpus: &[Computed]) -> Outcome {
    let one = find(corpus, "glue", &[("m", "1"), ("perturb", "none")])?.table().b1_top();
    let two = find(corpus, "glue", &[("m", "2"), ("perturb", "none")])?.table().b1_top();
    let cut = find(corpus, "glue", &[("m", "2"), ("perturb", "1")])?.table().b1_top();
    ensure(one == 1 && two == 2, || format!("m = 1 gives {one}, m = 2 gives {two}"))?;
    ensure(cut + 1 == two, || format!("perturbed copy gives {cut}"))?;
    Ok(format!("m = 1: {one}, m = 2: {two}, perturbed: {cut}"))
}

fn add_a_line(corpus: &[Computed]) -> Outcome {
    let mut seen = Vec::new();
    for base_name in ["ziegler_conic", "ziegler_generic"] {
        let added = find(corpus, "add_line", &[("base", base_name)])?;
        let base = find(corpus, base_name, &[])?;
        let last = added.arrangement.len() - 1;
        let h = added.arrangement.form(last);
        ensure(added.arrangement.delete(last).unwrap() == base.arrangement, || {
            format!("{}: deleting the new line does not give the base", added.label())
        })?;
        let through = base
            .arrangement
            .flats_of_rank(2)
            .iter()
            .filter(|x| base.arrangement.form_contains_flat(h, x))
            .count();
        ensure(through == 1, || format!("{}: new line meets {through} points", added.label()))?;
        let after = added.table().b1.get(&added.n().saturating_sub(1)).copied().unwrap_or(0);
        let before = base.table().b1_top();
        ensure(after == before, || {
            format!("{}: b_1,n = {after} but base b_1,n-1 = {before}", added.label())
        })?;
        seen.push(format!("{base_name} {before} -> {after}"));
    }
    Ok(seen.join(", "))
}

fn saturation_formula(corpus: &[Computed]) -> Outcome {
    let mut count = 0;
    for c in corpus.iter().filter(|c| c.arrangement.ambient() == 3) {
        let a = &c.arrangement;
        let n = c.n();
        let products = polyjac::products_slice(a).map_err(|e| e.to_string())?;
        let vanish = common::vanishing_order_slice(a, n - 1);
        ensure(products.space == vanish, || {
            format!("{}: products slice differs from the vanishing-order oracle", c.label())
        })?;
        for d in [n - 1, n] {
            let sat = polyjac::ksat_slice(a, 2, d).map_err(|e| e.to_string())?.space;
            let naive = common::naive_saturation(a, d);
            ensure(sat == naive, || format!("{}: degree {d} saturation differs from intersection", c.label()))?;
            let jac = polyjac::jacobian_slice(a, d).map_err(|e| e.to_string())?.space;
            let outer = common::vanishing_order_slice(a, d);
            ensure(sat.contains_subspace(&jac).unwrap(), || format!("{}: J not in J^sat in degree {d}", c.label()))?;
            ensure(outer.contains_subspace(&sat).unwrap(), || {
                format!("{}: J^sat not in the vanishing-order ideal in degree {d}", c.label())
            })?;
        }
        count += 1;
    }
    Ok(format!("{count} line arrangements, degrees n-1 and n"))
}

fn hilbert_consistency(corpus: &[Computed]) -> Outcome {
    let checks: Vec<Result<usize, String>> = with_tables(corpus)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|c| {
            let res = c.resolution.as_ref().unwrap();
            let spanned = resolution::generated_dims(&c.arrangement, res).map_err(|e| format!("{}: {e}", c.label()))?;
            for e in 0..c.n() {
                let formula = res.table.hilbert_value(e);
                let direct = resolution::d0_dim(&c.arrangement, e).map_err(|err| err.to_string())?;
                ensure(direct as i64 == formula && spanned[e as usize] == direct, || {
                    format!(
                        "{}: degree {e}: dim D0 = {direct}, spanned {}, table gives {formula}",
                        c.label(),
                        spanned[e as usize]
                    )
                })?;
            }
            Ok(c.n() as usize)
        })
        .collect();
    let mut degrees = 0;
    for r in &checks {
        degrees += r.clone()?;
    }
    Ok(format!("{} tables, {degrees} degrees", checks.len()))
}

fn nearly_free(corpus: &[Computed]) -> Outcome {
    for k in 3u32..=5 {
        let ks = k.to_string();
        let c = find(corpus, "pencil_plus", &[("k", &ks), ("g", "2")])?;
        let t = c.table();
        let class = resolution::classify_table(t);
        ensure(class == Classification::NearlyFree { a: 2, b: k }, || {
            format!("k = {k}: {class:?}")
        })?;
        let b = t.b1.get(&(k + 1)).copied().unwrap_or(0);
        ensure(b == 1, || format!("k = {k}: b_1,k+1 = {b}"))?;
        ensure(!c.formal(), || format!("k = {k}: formal"))?;
    }
    Ok("k = 3, 4, 5: nearly free (2, k), b_1,k+1 = 1, not formal".into())
}

type Criterion = (&'static str, fn(&[Computed]) -> Outcome);

const CRITERIA: &[Criterion] = &[
    ("D3 formality", d3_formality),
    ("A3 freeness", a3_freeness),
    ("Ziegler pair", ziegler_pair),
    ("b_1,n-1 = saturation = weak P-Reps", central_triangle),
    ("rigidity correspondence", rigidity_correspondence),
    ("regularity bounds and characterization", regularity_bounds),
    ("gluing Dixon copies", gluing),
    ("adding a line", add_a_line),
    ("saturation through flats", saturation_formula),
    ("Hilbert consistency", hilbert_consistency),
    ("nearly free family", nearly_free),
];

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus: Vec<Computed> = constructions::corpus().into_par_iter().map(Computed::new).collect();
    println!(
        "corpus: {} entries computed in {:.1} s",
        corpus.len(),
        start.elapsed().as_secs_f64()
    );
    let mut failed = 0;
    for (i, (title, check)) in CRITERIA.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| check(&corpus)))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail} ({secs:.1} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why} ({secs:.1} s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed in {:.1} s",
        CRITERIA.len() - failed,
        CRITERIA.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
