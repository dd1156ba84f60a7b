use std::path::PathBuf;
use std::process::{Command, Output};

use arrform::arrangement::Arrangement;
use arrform::exactlin::Rational;
use arrform::rigidity::{self, Framework};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrform"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

/// Writes `gen NAME` output to a fresh file and returns its path.
fn generated(name: &str, params: &[&str]) -> PathBuf {
    let mut args = vec!["gen", name];
    for p in params {
        args.extend(["--param", p]);
    }
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = std::env::temp_dir().join(format!("arrform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}-{}.json", params.join("-")));
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

fn path_str(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn d3_is_formal() {
    let f = generated("d3", &[]);
    let out = run(&["formality", path_str(&f)]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["command"], "formality");
    assert_eq!(r["verdicts"]["formal"], true);
    assert_eq!(r["verdicts"]["nontrivial_dim"], 0);
    assert_eq!(r["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn ziegler_generic_betti_row() {
    let f = generated("ziegler_generic", &[]);
    let r = json(&run(&["betti", path_str(&f)]));
    let rows = r["tables"]["betti"]["rows"].as_array().unwrap();
    assert!(rows.contains(&serde_json::json!([6, 6, 4])));
    assert_eq!(r["verdicts"]["regularity"], 6);
    assert_eq!(r["verdicts"]["duality_agree"], true);

    let pretty = run(&["betti", path_str(&f), "--pretty"]);
    let text = String::from_utf8(pretty.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().eq(["6:", "6", "4"])), "{text}");
}

#[test]
fn ziegler_conic_crosscheck() {
    let f = generated("ziegler_conic", &[]);
    let out = run(&["--assert", "crosscheck", path_str(&f)]);
    assert!(out.status.success());
    let r = json(&out);
    for key in ["b1_top", "sat_quotient", "wprep_nontrivial", "motion_nontrivial"] {
        assert_eq!(r["verdicts"][key], 1, "{key}");
    }
    assert_eq!(r["verdicts"]["agree"], true);
}

#[test]
fn certificates_reverify() {
    let f = generated("ziegler_conic", &[]);
    let r = json(&run(&["wprep", path_str(&f), "--rank", "3", "--realize"]));
    let f: Framework = serde_json::from_slice(&std::fs::read(&f).unwrap()).unwrap();
    let a = rigidity::arrangement_of(&f).unwrap();
    let n = a.relation_matrix(3).unwrap();
    let basis: Vec<Vec<Rational>> = serde_json::from_value(r["certificates"]["nontrivial_basis"].clone()).unwrap();
    assert_eq!(basis.len(), 1);
    for lambda in &basis {
        assert!(n.mul_vec(lambda).unwrap().iter().all(Rational::is_zero));
    }
    let realized = &r["certificates"]["realizations"][0];
    assert_eq!(realized["weak_rep_verified"], true);
    let b: Arrangement = serde_json::from_value(realized["arrangement"].clone()).unwrap();
    assert!(arrform::persp::verify_weak_rep(&a, &b, 3).unwrap());
}

#[test]
fn rigidity_redraws_dixon() {
    let f = generated("dixon", &[]);
    let r = json(&run(&["rigidity", path_str(&f)]));
    assert_eq!(r["verdicts"]["nontrivial_dim"], 1);
    assert_eq!(r["verdicts"]["correspondence_agree"], true);
    assert_eq!(r["certificates"]["redrawings"][0]["parallel"], true);
    let out = run(&["--assert", "rigidity", path_str(&f)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn jacobian_quotient() {
    let f = generated("ziegler_conic", &[]);
    let r = json(&run(&["jacobian", path_str(&f), "--codim", "2", "--degree", "8"]));
    assert_eq!(r["verdicts"]["quotient_dim"], 1);
    assert_eq!(r["certificates"]["quotient_representatives"].as_array().unwrap().len(), 1);
}

#[test]
fn reports_are_deterministic() {
    let f = generated("pencil_plus", &["k=4", "g=2"]);
    let g = generated("pencil_plus", &["g=2", "k=4"]);
    assert_eq!(std::fs::read(&f).unwrap(), std::fs::read(&g).unwrap());
    let first = run(&["betti", path_str(&f)]);
    let second = run(&["betti", path_str(&f)]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json(&first)["verdicts"]["classification"]["kind"], "nearly_free");
}

#[test]
fn exit_codes() {
    let f = generated("ziegler_conic", &[]);
    assert_eq!(run(&["--assert", "formality", path_str(&f)]).status.code(), Some(1));
    assert_eq!(run(&["formality", path_str(&f)]).status.code(), Some(0));

    let missing = run(&["formality", "/nonexistent/input.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(json(&missing)["error"]["kind"], "io");

    let dir = std::env::temp_dir();
    let bad = dir.join(format!("arrform-bad-{}.json", std::process::id()));
    std::fs::write(&bad, r#"{"ambient": 3, "forms": [["1", "0", "zero"]]}"#).unwrap();
    let out = run(&["formality", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "malformed_input");

    let pencil = generated("pencil", &["k=4"]);
    let out = run(&["betti", path_str(&pencil)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "precondition");

    assert_eq!(run(&["gen", "no_such_thing"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "pencil", "--param", "k"]).status.code(), Some(2));
}

#[test]
fn corpus_passes() {
    let out = run(&["corpus"]);
    let r = json(&out);
    assert!(out.status.success(), "{}", r["tables"]);
    assert_eq!(r["verdicts"]["all_passed"], true);
    assert_eq!(r["verdicts"]["entries"], r["verdicts"]["passed"]);
}
