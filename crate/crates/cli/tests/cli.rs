use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hmf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmf")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

const BOX2: &str = r#"{"xi":[0,0],"intervals":[null,[0.3,1.2]]}"#;

#[test]
fn relation_example() {
    let v = json(&hmf(&["hecke", "verify-relation", "--p", "2", "--k", "1", "--m", "1"]));
    assert_eq!(v, serde_json::json!({"T16": 1, "T4": 2, "T1": 4}));
    let v = json(&hmf(&["hecke", "verify-relation", "--p", "3", "--k", "1", "--m", "2"]));
    assert_eq!(v, serde_json::json!({"T729": 1, "T81": 3, "T9": 9}));
}

#[test]
fn phi_of_s_polynomial_vanishes() {
    let v = json(&hmf(&["measure", "phi", "--p", "2:0", "--spoly", "1"]));
    assert!(v["value"].as_f64().unwrap().abs() < 1e-8);
    let v = json(&hmf(&["measure", "phi", "--p", "2:0", "--interval", "0:2.8284271247461903"]));
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(hmf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hmf(&["measure", "eval", "--kind", "pl0"]).status.code(), Some(2));
    assert_eq!(hmf(&["--help"]).status.code(), Some(0));
    let bad = hmf(&["measure", "eval", "--kind", "pl0", "--interval", "3:1"]);
    assert_eq!(bad.status.code(), Some(1));
    let stderr = String::from_utf8(bad.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    let err: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["error"], "measure");
    let unknown = hmf(&["--field", "Q(sqrt 5)", "hecke", "spoly", "--p", "7:3", "--k", "1"]);
    assert_eq!(unknown.status.code(), Some(1));
}

#[test]
fn atoms_and_spoly_output() {
    let v = json(&hmf(&["measure", "eval", "--kind", "pl1", "--interval", "-0.75:-0.75"]));
    assert_eq!(v["value"], 2.0);
    let v = json(&hmf(&["--field", "Q(sqrt 5)", "hecke", "spoly", "--p", "2:0", "--k", "1"]));
    assert_eq!(v["coeffs"], serde_json::json!(["-4", "0", "1"]));
}

#[test]
fn kloosterman_eval_and_scan() {
    let v = json(&hmf(&["kloosterman", "eval", "--c", "5", "--r", "1", "--rp", "1"]));
    assert!((v["re"].as_f64().unwrap() - 0.381_966_011_250_105_1).abs() < 1e-9);
    assert_eq!(v["symmetry_holds"], true);

    let dir = tempfile::tempdir().unwrap();
    let chi = path(dir.path(), "chi.json");
    fs::write(&chi, r#"[{"unit":[3],"order":2,"exponent":1}]"#).unwrap();
    let v = json(&hmf(&["--level", "4", "kloosterman", "eval", "--c", "12", "--r", "1", "--rp", "3", "--chi", &chi]));
    assert_eq!(v["symmetry_holds"], true);

    let out = hmf(&["--format", "csv", "kloosterman", "scan", "--max-norm", "30"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("c,norm,abs_k,unit_pairs,bound,ratio"));
    assert_eq!(text.lines().count(), 31);
}

#[test]
fn box_file_is_shared_by_measure_and_equidist() {
    let dir = tempfile::tempdir().unwrap();
    let boxfile = path(dir.path(), "box.json");
    fs::write(&boxfile, BOX2).unwrap();
    let v = json(&hmf(&["--field", "Q(sqrt 5)", "measure", "box", "--spec", &boxfile, "--t", "0.25"]));
    assert!(v["pl"]["value"].as_f64().unwrap() >= 0.0);
    let inline = json(&hmf(&["--field", "Q(sqrt 5)", "measure", "box", "--spec", BOX2, "--t", "0.25"]));
    assert_eq!(v, inline);
}

#[test]
fn synth_output_feeds_run_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    for (format, name) in [("json", "ds.jsonl"), ("csv", "ds.csv")] {
        let data = path(dir.path(), name);
        let synth = hmf(&[
            "--field", "Q(sqrt 6)", "--seed", "4", "--format", format, "--out", &data,
            "equidist", "synth", "--box", BOX2, "--t", "20", "--primes", "2:0,3:0", "--count", "3000",
        ]);
        assert!(synth.status.success(), "{}", String::from_utf8_lossy(&synth.stderr));
        let summary = path(dir.path(), &format!("{name}.summary.json"));
        let run = hmf(&[
            "--field", "Q(sqrt 6)", "--format", "csv", "equidist", "run", "--data", &data, "--box", BOX2,
            "--t", "5,20", "--intervals", "2:0=[0,1];3:0=[1,2]", "--calibrate-at", "20", "--summary", &summary,
        ]);
        assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
        let report = String::from_utf8(run.stdout).unwrap();
        assert_eq!(report.lines().next(), Some("t,count,prediction,ratio,v1"));
        assert_eq!(report.lines().count(), 3);
        let s: Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
        let ratio = s["final_ratio"].as_f64().unwrap();
        assert!((ratio - 1.0).abs() < 3.0 / 3000f64.sqrt() * 3.0, "{format}: {ratio}");
    }
}

#[test]
fn exceptional_band_counts_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let data = path(dir.path(), "ds.jsonl");
    let synth = hmf(&[
        "--field", "Q(sqrt 6)", "--out", &data, "equidist", "synth", "--box", BOX2, "--t", "10", "--primes", "2:0",
        "--count", "2000",
    ]);
    assert!(synth.status.success());
    let v = json(&hmf(&[
        "--field", "Q(sqrt 6)", "equidist", "run", "--data", &data, "--box", BOX2, "--t", "10", "--intervals",
        "2:0=(2.8284271247461903,3]",
    ]));
    assert_eq!(v["rows"][0]["count"], 0.0);
    assert_eq!(v["rows"][0]["prediction"], 0.0);
    assert_eq!(v["rows"][0]["ratio"], Value::Null);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let args = [
        "--field", "Q(sqrt 5)", "--seed", "9", "equidist", "synth", "--box", BOX2, "--t", "6", "--primes", "2:0",
        "--count", "500",
    ];
    let a = hmf(&args);
    let b = hmf(&args);
    let mut threaded = vec!["--threads", "1"];
    threaded.extend_from_slice(&args);
    let c = hmf(&threaded);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn tau_dataset_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = path(dir.path(), "tau.csv");
    let out = hmf(&["equidist", "tau", "--n", "100", "--table", &table]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let record: Value = serde_json::from_str(text.lines().nth(1).unwrap()).unwrap();
    assert_eq!(record["lambda_p"]["2:0"], 0.75);
    assert_eq!(record["src"], "tau");
    let rows: Vec<String> = fs::read_to_string(&table).unwrap().lines().take(5).map(String::from).collect();
    assert_eq!(rows, ["n,tau", "1,1", "2,-24", "3,252", "4,-1472"]);
    assert_eq!(hmf(&["equidist", "tau", "--n", "2000000"]).status.code(), Some(1));
}

#[test]
fn field_info() {
    let v = json(&hmf(&["--field", "Q(sqrt 5)", "field", "info"]));
    assert_eq!(v["discriminant"], 5);
    assert_eq!(v["fundamental_unit_norm"], -1);
    let primes = json(&hmf(&["--field", "Q(sqrt 5)", "field", "primes", "--max-norm", "11"]));
    let labels: Vec<&str> = primes.as_array().unwrap().iter().map(|p| p["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["2:0", "5:0", "3:0", "11:0", "11:1"]);
}
