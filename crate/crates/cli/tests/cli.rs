use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fqmodsym"))
        .args(args)
        .env_remove("FQMODSYM_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = run(&all);
    let code = out.status.code().unwrap();
    assert!(code != 1, "{}", String::from_utf8_lossy(&out.stderr));
    (serde_json::from_slice(&out.stdout).unwrap(), code)
}

#[test]
fn space_report() {
    let (v, code) = json(&["space", "--q", "2", "--n", "T^5+T^2+1"]);
    assert_eq!(code, 0);
    assert_eq!(v["generators"], 33);
    assert_eq!(v["cusps"], 2);
    assert_eq!(v["rings"]["q"]["dim_sm0"], 10);
    assert_eq!(v["rings"]["fp"]["dim_sm"], 11);
    assert_eq!(v["torsion"], serde_json::json!([]));
}

#[test]
fn even_degree_torsion() {
    let (v, code) = json(&["torsion", "--q", "3", "--n", "T^4+T+2"]);
    assert_eq!(code, 0);
    assert_eq!(v["torsion"], serde_json::json!(["4"]));
}

#[test]
fn hecke_routes_agree_and_identity() {
    let (v, code) = json(&["hecke", "--q", "3", "--n", "T^3+2*T+2", "--p", "T^2+1", "--check-dual", "--ring", "q"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
    let (v, _) = json(&["hecke", "--q", "2", "--n", "T^4+T+1", "--p", "1"]);
    assert_eq!(v["identity"], true);
    let (v, _) = json(&["hecke", "--q", "2", "--n", "T^4+T+1", "--p", "T^2", "--digest", "--cuspidal"]);
    assert_eq!(v["recurrence"], true);
    assert!(v.get("matrix").is_none());
}

#[test]
fn claims_exit_codes_and_empty_range() {
    let (v, code) = json(&["claims", "--q", "2", "--degrees", "4..5", "--no-timings"]);
    assert_eq!(code, 0);
    assert_eq!(v.as_array().unwrap().len(), 9);
    let (v, code) = json(&["claims", "--q", "2", "--degrees", "5..4"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!([]));
    // S_3 does not vanish at degree 7, which the table flags as a mismatch
    let (v, code) = json(&["claims", "--q", "2", "--degrees", "7", "--first-k", "1", "--no-torsion"]);
    assert_eq!(code, 2);
    assert_eq!(v[0]["independence"]["(S_<=1,S_2)"], true);
}

#[test]
fn claims_output_is_deterministic_without_timings() {
    let args = ["claims", "--q", "3", "--degrees", "3..4", "--first-k", "2", "--no-timings", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn prop61_checks_every_linear_u() {
    let (v, code) = json(&["verify-prop61", "--q", "3", "--n", "T^4+T+2"]);
    assert_eq!(code, 0);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["holds"] == true));
}

#[test]
fn refusals_exit_with_one() {
    for args in [
        vec!["space", "--q", "2", "--n", "0"],
        vec!["space", "--q", "4", "--n", "T^3+T+1"],
        vec!["verify-prop61", "--q", "2", "--n", "T^4+T"],
        vec!["hecke", "--q", "2", "--n", "T^3+T+1", "--p", "T", "--route", "nope"],
        vec!["space", "--q", "3", "--n", "T^9+T+1", "--max-generators", "100"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
}

#[test]
fn cache_hits_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["--cache-dir", d, "hecke", "--q", "2", "--n", "T^5+T^2+1", "--p", "T+1", "--format", "json"];
    let first = run(&args);
    let (entries, _) = json(&["--cache-dir", d, "cache", "inspect"]);
    assert_eq!(entries.as_array().unwrap().len(), 2);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    let (cleared, _) = json(&["--cache-dir", d, "cache", "clear"]);
    assert_eq!(cleared["removed"], 2);
}

#[test]
fn routes_are_listed() {
    let (v, _) = json(&["routes"]);
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["merel", "definitional"]);
}
