use std::path::Path;
use std::process::Command;

use serde_json::Value;

use rgg_harness::cli::{run_with, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("rgg").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn strip_wall(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("wall_ms");
            m.values_mut().for_each(strip_wall);
        }
        Value::Array(a) => a.iter_mut().for_each(strip_wall),
        _ => {}
    }
}

#[test]
fn gen_writes_points_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.csv");
    let edges = dir.path().join("edges.csv");
    let p = pts.to_str().unwrap();
    let (code, _, err) = run(&["gen", "--n", "1000", "--r", "2.5", "--seed", "7", "--out", p, "--edges", edges.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&pts).unwrap();
    assert_eq!(text.lines().next(), Some("id,x,y"));
    assert_eq!(text.lines().count(), 1001);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("pts.json")).unwrap()).unwrap();
    assert_eq!(meta["n"], 1000);
    assert_eq!(meta["r"], 2.5);
    assert_eq!(meta["seed"]["master_seed"], 7);
    assert!(std::fs::read_to_string(&edges).unwrap().starts_with("src,dst"));

    let d = run_json(&["dist", "--points", p, "--u", "3", "--v", "900", "--path"]);
    let hops = d["d_G"].as_u64().unwrap();
    assert_eq!(d["path"].as_array().unwrap().len() as u64, hops + 1);
    assert!(hops >= d["min_hops"].as_u64().unwrap());
}

#[test]
fn poissonized_gen_labels_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("p.csv");
    let (code, _, err) = run(&[
        "gen", "--n", "400", "--r", "rc*2", "--model", "poissonized", "--u-at", "-5,0", "--v-at", "5,0", "--out",
        pts.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.json")).unwrap()).unwrap();
    assert_eq!(meta["model"], "poissonized-uv");
    assert!(meta["labelled_u"].is_u64() && meta["labelled_v"].is_u64());
}

#[test]
fn usage_errors_exit_two() {
    let (code, _, err) = run(&["verify", "--n", "1000", "--r", "rc", "--bogus"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--bogus") && err.contains("Usage"));
    let (code, _, err) = run(&["verify", "--n", "1000", "--r", "fast"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--r"));
    let (code, _, err) = run(&["gen", "--n", "100", "--r", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--out"));
    let (code, _, _) = run(&["verify", "--n", "1000", "--r", "rc", "--trials", "0"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, _, _) = run(&["tails", "--trials", "10"]);
    assert_eq!(code, EXIT_USAGE);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("threshold"));
}

#[test]
fn reports_are_reproducible_and_job_independent() {
    let args = ["verify", "--n", "2000", "--r", "rc,2*rc", "--trials", "4", "--pairs", "10", "--seed", "11"];
    let mut a = run_json(&[&args[..], &["--jobs", "1"]].concat());
    let mut b = run_json(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!(a["canonical_sha256"], b["canonical_sha256"]);
    strip_wall(&mut a);
    strip_wall(&mut b);
    assert_eq!(a, b);
    let other = run_json(&["verify", "--n", "2000", "--r", "rc,2*rc", "--trials", "4", "--pairs", "10", "--seed", "12"]);
    assert_ne!(a["canonical_sha256"], other["canonical_sha256"]);

    let rows = a["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2 * 4 * 10 + rows.iter().filter(|r| r["pair_kind"] == "corner").count());
    for row in rows {
        for key in ["n", "r", "master_seed", "trial_index", "trial_seed", "pass"] {
            assert!(!row[key].is_null(), "{key}");
        }
        if row["status"] == "OK" {
            assert!(row["d_G"].as_u64().unwrap() >= row["min_hops"].as_u64().unwrap());
        } else {
            assert_eq!(row["status"], "UNREACHABLE");
        }
    }
}

#[test]
fn csv_format_writes_rows_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let (code, _, err) = run(&[
        "threshold", "--n", "500", "--trials", "5", "--format", "csv", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("experiment,n,r,r_spec,r_over_rc,master_seed,trial_index,trial_seed,connected,wall_ms"));
    assert_eq!(text.lines().count(), 1 + 10 * 5);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["summary"][0]["points"].as_array().unwrap().len(), 10);
    assert_eq!(meta["row_count"], 50);
}

#[test]
fn diameter_in_complete_regime_is_one() {
    let v = run_json(&["diameter", "--n", "200", "--r", "20.1", "--trials", "3"]);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["lower"], 1);
        assert_eq!(row["upper"], 1);
        assert!(row["bound_value"].as_f64().unwrap() >= 1.0);
    }
    let v = run_json(&["diameter", "--n", "3000", "--r", "3", "--trials", "2", "--mode", "bounded"]);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["bound_applicable"], false);
        if row["status"] == "OK" {
            assert!(row["lower"].as_u64().unwrap() <= row["upper"].as_u64().unwrap());
        }
    }
}

#[test]
fn strip_certify_and_tails_run() {
    let v = run_json(&["strip-path", "--n", "5000", "--r", "rc*5", "--trials", "2", "--pairs", "5"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["summary"][0]["attempts"], 10);
    for row in v["rows"].as_array().unwrap() {
        assert!(row["t"].as_f64().unwrap() > row["r"].as_f64().unwrap());
        if row["status"] == "success" {
            assert_eq!(row["path_valid"], true);
        }
    }
    let v = run_json(&["certify", "--n", "5000", "--r", "rc*3", "--trials", "2", "--pairs", "5"]);
    assert_eq!(v["summary"][0]["unsound"], 0);
    let v = run_json(&["tails", "--n", "5,20", "--delta", "0.5", "--trials", "2000"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn binary_verify_on_a_million_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.json");
    let status = Command::new(env!("CARGO_BIN_EXE_rgg"))
        .args(["verify", "--n", "1000000", "--r", "rc", "--trials", "5", "--pairs", "20", "--seed", "1", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&out)).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    let cell = &report["summary"][0];
    assert_eq!(cell["deterministic_violations"], 0);
    assert_eq!(cell["lower_violations"], 0);
}
