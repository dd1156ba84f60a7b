use std::collections::BTreeMap;
use std::fmt::Write;

use arrform::constructions::{self, Payload};
use arrform::exactlin::{Rational, SubspaceBasis};
use arrform::persp::{self, PerspectiveDatum};
use arrform::polyjac::{self, Polynomial};
use arrform::resolution::{self, Classification};
use arrform::rigidity;
use arrform::Error;
use rayon::prelude::*;
use serde_json::json;

use crate::input::Input;
use crate::report::{CliError, Outcome, Report};

/// Multiples of a nontrivial vector tried before giving up on a
/// realization without coinciding hyperplanes.
const REALIZE_SCALES: i64 = 16;

pub fn formality(input: &Input, rank: usize) -> Result<Outcome, CliError> {
    let w = persp::wprep_report(&input.arrangement, rank)?;
    let holds = w.dim_nontrivial == 0;
    let mut r = Report::new("formality", input.digest());
    if rank == 3 {
        r.verdict("formal", holds);
    } else {
        r.verdict("k_generated", holds);
    }
    r.verdict("rank", rank);
    r.verdict("nontrivial_dim", w.dim_nontrivial);
    r.verdict("trivial_dim", w.dim_trivial);
    r.verdict("total_dim", w.dim_total);
    r.certificate("nontrivial_basis", &w.basis_nontrivial);
    Ok(Outcome::new(r, holds))
}

pub fn wprep(input: &Input, rank: usize, realize: bool) -> Result<Outcome, CliError> {
    let a = &input.arrangement;
    let w = persp::wprep_report(a, rank)?;
    let holds = w.dim_nontrivial == 0;
    let mut r = Report::new("wprep", input.digest());
    r.verdict("rank", rank);
    r.verdict("k_generated", holds);
    r.verdict("nontrivial_dim", w.dim_nontrivial);
    r.verdict("trivial_dim", w.dim_trivial);
    r.verdict("total_dim", w.dim_total);
    r.certificate("nontrivial_basis", &w.basis_nontrivial);
    if realize {
        let mut realizations = Vec::new();
        for lambda in &w.basis_nontrivial {
            realizations.push(realize_one(a, lambda, rank)?);
        }
        r.certificate("realizations", realizations);
    }
    Ok(Outcome::new(r, holds))
}

/// Realizes the first multiple `t * lambda` whose hyperplanes stay distinct.
fn realize_one(
    a: &arrform::arrangement::Arrangement,
    lambda: &[Rational],
    rank: usize,
) -> Result<serde_json::Value, CliError> {
    let mut last = None;
    for t in 1..=REALIZE_SCALES {
        let scaled: Vec<Rational> = lambda.iter().map(|x| x * &Rational::from_int(t)).collect();
        let datum = PerspectiveDatum::with_default_h0(a.clone(), scaled.clone(), rank)?;
        match persp::realize(&datum) {
            Ok(b) => {
                let verified = persp::verify_weak_rep(a, &b, rank)?;
                if !verified {
                    return Err(Error::Inconsistent("realized arrangement is not a weak representation".into()).into());
                }
                return Ok(json!({
                    "lambda": scaled,
                    "h0": datum.h0(),
                    "arrangement": b,
                    "weak_rep_verified": verified,
                }));
            }
            Err(e @ Error::DegenerateRealization { .. }) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(json!({
        "lambda": lambda,
        "error": last.map(|e| e.to_string()),
    }))
}

fn polys(index: &polyjac::MonomialIndex, vectors: &[Vec<Rational>]) -> Vec<Polynomial> {
    vectors.iter().map(|v| Polynomial::from_vector(index, v)).collect()
}

pub fn jacobian(input: &Input, codim: usize, degree: Option<u32>) -> Result<Outcome, CliError> {
    let a = &input.arrangement;
    let d = degree.unwrap_or(a.len() as u32 - 1);
    let sat = polyjac::ksat_slice(a, codim, d)?;
    let jac = polyjac::jacobian_slice(a, d)?;
    if !sat.contains_slice(&jac)? {
        return Err(Error::Inconsistent(format!("Jacobian slice of degree {d} is not contained in its saturation")).into());
    }
    let quotient = sat.dim() - jac.dim();
    let mut r = Report::new("jacobian", input.digest());
    r.verdict("codim", codim);
    r.verdict("degree", d);
    r.verdict("jacobian_dim", jac.dim());
    r.verdict("saturation_dim", sat.dim());
    r.verdict("quotient_dim", quotient);
    r.verdict("saturated", quotient == 0);
    let reps = sat.space.complement_of(&jac.space)?;
    r.certificate("quotient_representatives", polys(&sat.monomial_index(), &reps));
    Ok(Outcome::new(r, quotient == 0))
}

pub fn betti(input: &Input) -> Result<Outcome, CliError> {
    let a = &input.arrangement;
    let res = resolution::resolve(a)?;
    let t = &res.table;
    let class = resolution::classify_table(t);
    let duality = resolution::duality_check_with(a, t)?;
    let mut r = Report::new("betti", input.digest());
    r.verdict("regularity", t.regularity);
    r.verdict("b1_top", t.b1_top());
    r.verdict("classification", &class);
    r.verdict("free", matches!(class, Classification::Free { .. }));
    r.verdict("duality_agree", duality.agree);
    if a.is_irreducible_line_arrangement()? {
        r.verdict("formal_via_regularity", t.regularity < a.len() as u32 - 2);
    }
    let rows: Vec<[u64; 3]> = t.rows().iter().map(|&(j, x, y)| [j as u64, x as u64, y as u64]).collect();
    r.table("betti", json!({ "n": t.n, "b0": t.b0, "b1": t.b1, "rows": rows }));
    r.table("duality", &duality);
    r.certificate("generators", &res.generators);

    let mut text = t.to_string();
    let _ = writeln!(text, "regularity: {}", t.regularity);
    let _ = writeln!(text, "classification: {}", describe(&class));
    let _ = write!(text, "duality: {}", if duality.agree { "agrees" } else { "DISAGREES" });
    let holds = matches!(class, Classification::Free { .. });
    Ok(Outcome::new(r, holds).rendered(text))
}

fn describe(c: &Classification) -> String {
    match c {
        Classification::Free { d1, d2 } => format!("free ({d1}, {d2})"),
        Classification::NearlyFree { a, b } => format!("nearly free ({a}, {b})"),
        Classification::PlusOne { a, b, level } => format!("plus-one generated ({a}, {b}), level {level}"),
        Classification::Other => "other".into(),
    }
}

pub fn rigidity(input: &Input) -> Result<Outcome, CliError> {
    let f = input.framework()?;
    let motions = rigidity::motion_space(f);
    let generic = rigidity::has_generic_matroid(f)?;
    let mut r = Report::new("rigidity", input.digest());
    let rigid = motions.dim_nontrivial == 0;
    r.verdict("motion_dim", motions.basis.dim());
    r.verdict("trivial_dim", motions.dim_trivial);
    r.verdict("nontrivial_dim", motions.dim_nontrivial);
    r.verdict("infinitesimally_rigid", rigid);
    r.verdict("generic_matroid", generic);
    if generic {
        let c = rigidity::correspondence_check(f)?;
        r.verdict("wprep_nontrivial", c.wprep_nontrivial);
        r.verdict("correspondence_agree", c.agree);
    }
    let trivial = SubspaceBasis::span(2 * f.vertex_count(), rigidity::trivial_motions(f))?;
    let nontrivial = motions.basis.complement_of(&trivial)?;
    let mut redrawings = Vec::new();
    for m in &nontrivial {
        let d = rigidity::engineers_trick(f, m)?;
        let parallel = rigidity::is_parallel_redrawing(f, &d.placement);
        if !parallel {
            return Err(Error::Inconsistent("rotated motion is not a parallel redrawing".into()).into());
        }
        redrawings.push(json!({
            "placement": d.placement,
            "degenerate_edges": d.degenerate_edges,
            "parallel": parallel,
        }));
    }
    r.certificate("nontrivial_motions", &nontrivial);
    r.certificate("redrawings", redrawings);
    Ok(Outcome::new(r, rigid))
}

pub fn gen(name: &str, params: &[String]) -> Result<Outcome, CliError> {
    let mut map = BTreeMap::new();
    for p in params {
        let Some((k, v)) = p.split_once('=') else {
            return Err(CliError::Input(format!("parameter `{p}` is not of the form key=value")));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let entry = constructions::generate(name, &map)?;
    let body = match &entry.payload {
        Payload::Arrangement(a) => serde_json::to_value(a),
        Payload::Framework(f) => serde_json::to_value(f),
    }
    .map_err(Error::from)?;
    Ok(Outcome::raw(body))
}

pub fn crosscheck(input: &Input) -> Result<Outcome, CliError> {
    let a = &input.arrangement;
    let n = a.len() as u32;
    let b1_top = resolution::betti_table(a)?.b1_top();
    let sat = polyjac::ksat_slice(a, 2, n - 1)?;
    let jac = polyjac::jacobian_slice(a, n - 1)?;
    if !sat.contains_slice(&jac)? {
        return Err(Error::Inconsistent("Jacobian slice is not contained in its saturation".into()).into());
    }
    let sat_quotient = sat.dim() - jac.dim();
    let w = persp::wprep_report(a, 3)?;
    let mut values = vec![b1_top, sat_quotient, w.dim_nontrivial];

    let mut r = Report::new("crosscheck", input.digest());
    if let Some(f) = &input.framework {
        if rigidity::has_generic_matroid(f)? {
            let m = rigidity::motion_space(f).dim_nontrivial;
            r.verdict("motion_nontrivial", m);
            values.push(m);
        }
    }
    let agree = values.iter().all(|&v| v == values[0]);
    r.verdict("b1_top", b1_top);
    r.verdict("sat_quotient", sat_quotient);
    r.verdict("wprep_nontrivial", w.dim_nontrivial);
    r.verdict("agree", agree);

    let mut certified = Vec::new();
    for lambda in &w.basis_nontrivial {
        let f = polyjac::lambda_to_poly(a, lambda)?;
        if !polyjac::poly_membership(&f, &sat)? || polyjac::poly_membership(&f, &jac)? {
            return Err(Error::Inconsistent("weak P-Rep polynomial is not a saturation class".into()).into());
        }
        certified.push(json!({ "lambda": lambda, "polynomial": f }));
    }
    r.certificate("saturation_classes", certified);
    Ok(Outcome::new(r, agree))
}

pub fn corpus() -> Result<Outcome, CliError> {
    let entries = constructions::corpus();
    let results: Vec<(String, Result<constructions::Evaluation, Error>)> = entries
        .par_iter()
        .map(|e| (e.label(), constructions::evaluate(e)))
        .collect();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut passed = 0;
    for (label, result) in &results {
        match result {
            Ok(ev) if ev.passed() => {
                passed += 1;
                let _ = writeln!(text, "PASS  {label}");
                rows.push(json!({ "label": label, "passed": true, "observed": ev.observed }));
            }
            Ok(ev) => {
                let _ = writeln!(text, "FAIL  {label}: {}", ev.mismatches.join("; "));
                rows.push(json!({
                    "label": label,
                    "passed": false,
                    "observed": ev.observed,
                    "mismatches": ev.mismatches,
                }));
            }
            Err(e) => {
                let _ = writeln!(text, "FAIL  {label}: {e}");
                rows.push(json!({ "label": label, "passed": false, "error": e.to_string() }));
            }
        }
    }
    let all = passed == results.len();
    let _ = write!(text, "{passed} of {} entries passed", results.len());
    let mut r = Report::new("corpus", None);
    r.verdict("entries", results.len());
    r.verdict("passed", passed);
    r.verdict("all_passed", all);
    r.table("evaluations", rows);
    let mut out = Outcome::new(r, all).rendered(text);
    out.strict = true;
    Ok(out)
}
