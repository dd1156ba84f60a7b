//! WebAssembly bindings for the browser demo. Each export takes and returns
//! JSON strings; the pure functions underneath are plain Rust so they can be
//! tested natively.

use std::collections::BTreeMap;

use arrform::arrangement::Arrangement;
use arrform::constructions::{self, Payload};
use arrform::exactlin::{Rational, SubspaceBasis};
use arrform::persp;
use arrform::resolution;
use arrform::rigidity::{self, Framework};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Betti tables are skipped above this many lines to keep the page responsive.
const BETTI_LIMIT: usize = 14;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `"k=4 g=2"` into a parameter map; blank input means defaults. Values
/// may contain commas (`xs=1,2,5`), so pairs are separated by whitespace or `;`.
fn parse_params(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for part in text.split(|c: char| c.is_whitespace() || c == ';').filter(|s| !s.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("parameter `{part}` is not of the form key=value"))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

pub fn generate_json(name: &str, params: &str) -> Result<String, String> {
    let entry = constructions::generate(name, &parse_params(params)?).map_err(err)?;
    let value = match &entry.payload {
        Payload::Arrangement(a) => serde_json::to_value(a),
        Payload::Framework(f) => serde_json::to_value(f),
    }
    .map_err(err)?;
    serde_json::to_string_pretty(&value).map_err(err)
}

enum Parsed {
    Lines(Arrangement),
    Bars(Framework),
}

fn parse(input: &str) -> Result<Parsed, String> {
    let value: Value = serde_json::from_str(input).map_err(err)?;
    if value.get("vertices").is_some() {
        Ok(Parsed::Bars(serde_json::from_value(value).map_err(err)?))
    } else {
        Ok(Parsed::Lines(serde_json::from_value(value).map_err(err)?))
    }
}

fn floats(v: &[Rational]) -> Vec<f64> {
    v.iter().map(Rational::to_f64).collect()
}

/// Formality, intersection points and, for small line arrangements, the
/// Betti table of `D_0`. Frameworks are analyzed through their bar lines.
pub fn analyze_json(input: &str) -> Result<String, String> {
    let (a, framework) = match parse(input)? {
        Parsed::Lines(a) => (a, None),
        Parsed::Bars(f) => (rigidity::arrangement_of(&f).map_err(err)?, Some(f)),
    };
    let w = persp::wprep_report(&a, 3).map_err(err)?;
    let mut out = json!({
        "lines": a.len(),
        "forms": a.forms().iter().map(|f| floats(f.coefficients())).collect::<Vec<_>>(),
        "formal": w.dim_nontrivial == 0,
        "wprep_nontrivial": w.dim_nontrivial,
    });
    if a.ambient() == 3 {
        let points: Vec<Value> = a
            .flats_of_rank(2)
            .iter()
            .filter(|x| x.size() >= 3)
            .map(|x| {
                let p = a.flat_kernel(x).vectors().remove(0);
                json!({ "lines": x.indices, "point": floats(&p) })
            })
            .collect();
        out["multiple_points"] = json!(points);
    }
    if a.ambient() == 3 && a.is_essential() && a.len() <= BETTI_LIMIT {
        let t = resolution::betti_table(&a).map_err(err)?;
        out["betti"] = json!({
            "text": t.to_string(),
            "regularity": t.regularity,
            "b1_top": t.b1_top(),
            "classification": resolution::classify_table(&t),
        });
    }
    if let Some(f) = framework {
        let m = rigidity::motion_space(&f);
        out["motion_nontrivial"] = json!(m.dim_nontrivial);
        out["generic_matroid"] = json!(rigidity::has_generic_matroid(&f).map_err(err)?);
    }
    serde_json::to_string(&out).map_err(err)
}

/// The first nontrivial infinitesimal motion of a framework, with the
/// parallel redrawing obtained by rotating it a quarter turn.
pub fn flex_json(input: &str) -> Result<String, String> {
    let Parsed::Bars(f) = parse(input)? else {
        return Err("a framework (vertices and edges) is needed".into());
    };
    let m = rigidity::motion_space(&f);
    let trivial = SubspaceBasis::span(2 * f.vertex_count(), rigidity::trivial_motions(&f)).map_err(err)?;
    let nontrivial = m.basis.complement_of(&trivial).map_err(err)?;
    let Some(v) = nontrivial.first() else {
        return serde_json::to_string(&json!({ "rigid": true })).map_err(err);
    };
    let redrawn = rigidity::engineers_trick(&f, v).map_err(err)?;
    let out = json!({
        "rigid": false,
        "velocities": v.chunks(2).map(floats).collect::<Vec<_>>(),
        "redrawing": redrawn.placement.iter().map(|(x, y)| [x.to_f64(), y.to_f64()]).collect::<Vec<_>>(),
        "parallel": rigidity::is_parallel_redrawing(&f, &redrawn.placement),
    });
    serde_json::to_string(&out).map_err(err)
}

#[wasm_bindgen]
pub fn generate(name: &str, params: &str) -> Result<String, JsError> {
    generate_json(name, params).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(input: &str) -> Result<String, JsError> {
    analyze_json(input).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn flex(input: &str) -> Result<String, JsError> {
    flex_json(input).map_err(|e| JsError::new(&e))
}

/// Construction names for the example picker.
#[wasm_bindgen]
pub fn construction_names() -> String {
    constructions::NAMES.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ziegler_pair_in_the_page() {
        let conic = analyze_json(&generate_json("ziegler_conic", "").unwrap()).unwrap();
        let v: Value = serde_json::from_str(&conic).unwrap();
        assert_eq!(v["formal"], false);
        assert_eq!(v["betti"]["b1_top"], 1);
        assert_eq!(v["motion_nontrivial"], 1);
        assert_eq!(v["multiple_points"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn dixon_flex_is_parallel() {
        let v: Value = serde_json::from_str(&flex_json(&generate_json("dixon", "").unwrap()).unwrap()).unwrap();
        assert_eq!(v["rigid"], false);
        assert_eq!(v["parallel"], true);
        let t: Value = serde_json::from_str(&flex_json(&generate_json("triangle", "").unwrap()).unwrap()).unwrap();
        assert_eq!(t["rigid"], true);
    }

    #[test]
    fn params_and_errors() {
        assert!(generate_json("pencil_plus", "k=4 g=2").is_ok());
        assert!(generate_json("pencil_plus", "k").is_err());
        assert!(generate_json("dixon", "xs=1,2,3; ys=1,4,9").is_ok());
        assert!(analyze_json("{").is_err());
        assert!(flex_json(&generate_json("d3", "").unwrap()).is_err());
    }
}
