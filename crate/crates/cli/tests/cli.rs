use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn massey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_massey")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("massey-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn massey_product_with_zero_middle_character() {
    let out = massey(&["massey", "--group", "Z2^2", "--modulus", "2", "--chars", "[[1,0],[0,0],[0,1]]", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["essential"], false);
    assert_eq!(r["contains_zero"], true);
    assert_eq!(r["oracle"]["equal"], true);
    assert!(r["witness"]["rho"].is_array());
}

#[test]
fn non_homomorphism_is_invalid_input() {
    let out = massey(&["massey", "--group", "Z4", "--modulus", "4", "--chars", "[[0,1,1,0],[0,0,0,0],[0,0,0,0]]"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert!(r["error"].as_str().unwrap().contains("not a homomorphism"), "{r}");
    let out = massey(&["massey", "--group", "Z9000", "--modulus", "2", "--chars", "[[1],[1],[1]]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn guard_exceeded_exit_code() {
    let out = massey(&["sweep", "--group", "Z2^2", "--modulus", "2", "--guard", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["error"].as_str().unwrap().contains("guard exceeded"));
}

#[test]
fn cocycle_check_exhaustive_and_sampled() {
    let r = json(&massey(&["cocycle-check", "--n", "2", "--modulus", "2"]));
    assert_eq!(r["cocycle_exhaustive"], true);
    assert_eq!(r["cocycle_violations"], 0);
    assert_eq!(r["schreier_violations"], 0);
    let out = massey(&["cocycle-check", "--n", "4", "--modulus", "8", "--samples", "2000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["cocycle_exhaustive"], false);
    assert_eq!(r["triples_checked"], 2000);
    assert_eq!(r["bijective"], true);
}

#[test]
fn formation_reports() {
    let r = json(&massey(&["formation", "--fixture", &fixture("empty")]));
    assert_eq!(r["all_hold"], true);
    let r = json(&massey(&["formation", "--fixture", &fixture("negation")]));
    assert_eq!(r["axioms"]["kf4"]["holds"], false);
    assert_eq!(r["axioms"]["kf4"]["witness"]["subgroup"], serde_json::json!([0]));
    assert_eq!(r["axioms"]["kf4"]["witness"]["supergroup"], serde_json::json!([0, 1]));
    let out = massey(&["formation", "--fixture", &fixture("planted_z2xz2")]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let steps = r["pipeline"]["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["step"], "massey check");
    assert!(r["pipeline"]["rho"].as_array().unwrap().iter().all(|m| m.get("14").is_some()));
}

#[test]
fn failed_step_exits_with_invalid_input() {
    let mut spec: Value = serde_json::from_str(&std::fs::read_to_string(fixture("planted_u3z2")).unwrap()).unwrap();
    for row in spec["lattice"][1]["kappa"].as_array_mut().unwrap() {
        for v in row.as_array_mut().unwrap() {
            *v = 0.into();
        }
    }
    let path = tmp("broken.json");
    std::fs::write(&path, spec.to_string()).unwrap();
    let out = massey(&["pipeline", "--fixture", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["step"], "ω step");
    let out = massey(&["formation", "--fixture", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["pipeline_failure"]["step"], "ω step");
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let runs = [
        vec!["massey", "--group", "D4", "--modulus", "2", "--chars", "[[1,0],[0,1],[1,0]]"],
        vec!["cocycle-check", "--n", "3", "--modulus", "4", "--samples", "500", "--seed", "3"],
        vec!["pipeline", "--fixture", "FIX"],
        vec!["sweep", "--group", "Z3", "--modulus", "3", "--oracle"],
    ];
    let fix = fixture("planted_u3z2");
    for args in runs {
        let args: Vec<&str> = args.iter().map(|a| if *a == "FIX" { fix.as_str() } else { a }).collect();
        let a = massey(&args);
        let b = massey(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(massey_cli::render(&v).into_bytes(), a.stdout, "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let path = tmp("report.json");
    let args = ["formation", "--fixture", &fixture("kf3_only")];
    let stdout = massey(&args).stdout;
    let out = massey(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}
