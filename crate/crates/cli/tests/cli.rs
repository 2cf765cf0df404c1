use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_frameproof"));
    c.env_remove("FRAMEPROOF_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The 4x4 matrix with rows 1100, 0110, 1010, 0001, one codeword per column.
const A4: &str = r#"{"q": 2, "n": 4, "codewords": [[1,0,1,0],[1,1,0,0],[0,1,1,0],[0,0,0,1]]}"#;
const PERM3: &str = r#"{"q": 2, "n": 3, "codewords": [[1,0,0],[0,1,0],[0,0,1]]}"#;

#[test]
fn permutation_code_verifies() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "perm3.json", PERM3);
    let o = run(&["verify", "--code", s(&p), "--wide", "-t", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["holds"], true);
    assert_eq!(v["config"]["t"], 3);
    assert_eq!(v["config"]["wide"], true);
}

#[test]
fn failing_code_reports_a_one_based_witness() {
    let d = TempDir::new().unwrap();
    let p = write(&d, "A4.json", A4);
    for strategy in ["definitional", "cover-free", "crosscheck"] {
        let o = run(&["verify", "--code", s(&p), "--wide", "-t", "3", "--strategy", strategy]);
        assert_eq!(code(&o), 1, "{strategy}");
        let w = &json(&o)["witness"];
        assert_eq!(w["kind"], "coalition");
        assert_eq!(w["target"], 1);
        assert_eq!(w["coalition"], serde_json::json!([2, 3, 4]));
    }
    let o = run(&["verify", "--code", s(&p), "--wide", "-t", "2"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn witnesses_round_trip() {
    let d = TempDir::new().unwrap();
    let a4 = write(&d, "A4.json", A4);
    let o = run(&["verify", "--code", s(&a4), "--wide", "-t", "3"]);
    let report = write(&d, "report.json", &stdout(&o));
    let again = run(&["verify", "--code", s(&a4), "--wide", "-t", "3", "--witness", s(&report)]);
    assert_eq!(code(&again), 1);
    assert_eq!(json(&again)["witness_confirmed"], true);
    assert_eq!(json(&again)["witness"], json(&o)["witness"]);

    // a bare witness object works too; one that exhibits nothing is rejected
    let bare = write(&d, "w.json", &json(&o)["witness"].to_string());
    assert_eq!(code(&run(&["verify", "--code", s(&a4), "--wide", "-t", "3", "--witness", s(&bare)])), 1);
    let perm = write(&d, "perm4.json", r#"{"q":2,"n":4,"codewords":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#);
    let o = run(&["verify", "--code", s(&perm), "--wide", "-t", "3", "--witness", s(&bare)]);
    assert_eq!(code(&o), 64);
    // too large a coalition for the property
    assert_eq!(code(&run(&["verify", "--code", s(&a4), "--wide", "-t", "2", "--witness", s(&bare)])), 64);

    // a passing report re-checks by re-running the verifier
    let o = run(&["verify", "--code", s(&perm), "--wide", "-t", "3"]);
    let ok = write(&d, "ok.json", &stdout(&o));
    assert_eq!(code(&run(&["verify", "--code", s(&perm), "--wide", "-t", "3", "--witness", s(&ok)])), 0);
}

#[test]
fn separating_hash_witnesses_round_trip() {
    let d = TempDir::new().unwrap();
    let a4 = write(&d, "A4.json", A4);
    for strategy in ["definitional", "cover-free"] {
        let o = run(&["verify", "--code", s(&a4), "--wide", "--shf", "1", "3", "--strategy", strategy]);
        assert_eq!(code(&o), 1, "{strategy}");
        assert_eq!(json(&o)["witness"]["kind"], "separation");
        let rep = write(&d, "shf.json", &stdout(&o));
        let again = run(&["verify", "--code", s(&a4), "--wide", "--shf", "1", "3", "--witness", s(&rep)]);
        assert_eq!(code(&again), 1);
    }
}

#[test]
fn bound_table_as_csv() {
    let o = run(&["bounds", "--all", "-n", "10", "-t", "3", "-q", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("name,params,value,floor,exact"));
    assert!(out.lines().any(|l| l == "general_t,n=10;t=3,123,123,true"), "{out}");
    // one row per applicable bound, none tied to t = 2
    assert!(!out.contains("zhou_zhou"));
    let o = run(&["bounds", "--name", "phi", "-n", "6", "--eps", "1/3"]);
    let v = json(&o);
    assert_eq!(v["bounds"][0]["value"], "16");
    assert_eq!(v["bounds"][0]["floor"], "16");
}

#[test]
fn big_bounds_are_decimal_strings() {
    let o = run(&["bounds", "--name", "zhou_zhou", "-n", "200"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let value = v["bounds"][0]["value"].as_str().unwrap();
    assert!(value.len() > 50 && value.chars().all(|c| c.is_ascii_digit()));
    assert_eq!(code(&run(&["bounds", "--name", "nope", "-n", "3"])), 64);
    assert_eq!(code(&run(&["bounds", "--name", "kleitman", "-n", "3", "-s", "3"])), 64);
}

#[test]
fn search_manifest_and_optima_round_trip() {
    let d = TempDir::new().unwrap();
    let o = run(&["search", "-n", "3", "-t", "2", "-q", "2", "--wide", "--optima"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["certified"], true);
    assert_eq!(v["max"], 4);
    assert_eq!(v["optima_count"], v["optima"].as_array().unwrap().len());
    for (k, opt) in v["optima"].as_array().unwrap().iter().enumerate() {
        let p = write(&d, &format!("opt{k}.json"), &opt.to_string());
        assert_eq!(code(&run(&["verify", "--code", s(&p), "--wide", "-t", "2"])), 0);
    }

    let o = run(&["search", "--object", "cover-free", "-n", "5", "-t", "2", "--optima"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["certified"], true);
    for (k, opt) in v["optima"].as_array().unwrap().iter().enumerate() {
        let p = write(&d, &format!("fam{k}.json"), &opt.to_string());
        let o = run(&["family", "--family", s(&p), "--check", "cover-free", "-t", "2"]);
        assert_eq!(code(&o), 0);
    }
}

#[test]
fn budget_exhaustion_exits_two() {
    let o = run(&["search", "-n", "4", "-t", "2", "-q", "3", "--budget", "10"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["certified"], false);
    let o = run(&["threshold", "--kind", "n_q", "-t", "2", "-q", "3", "--cap", "4", "--budget", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn thresholds() {
    let o = run(&["threshold", "--kind", "n_star", "-t", "1", "--cap", "6"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"], serde_json::json!({"status": "found", "n": 4}));
    assert_eq!(code(&run(&["threshold", "--kind", "bogus", "-t", "1"])), 64);
}

#[test]
fn malformed_inputs_exit_64_with_positions() {
    let d = TempDir::new().unwrap();
    let bad = write(&d, "bad.txt", "2 2 2\n0 1\n0 x\n");
    let o = run(&["verify", "--code", s(&bad)]);
    assert_eq!(code(&o), 64);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.txt:3:3:"), "{err}");

    let bad = write(&d, "bad.json", "{\"q\": 2,\n \"n\": 2,\n \"codewords\": [[0, 1], [0 1]]}");
    let o = run(&["verify", "--code", s(&bad)]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8(o.stderr).unwrap().contains("bad.json:3:"));

    let bad = write(&d, "m.txt", "2 2\n10\n1a\n");
    let o = run(&["matrix", "--matrix", s(&bad), "--check", "disjunct"]);
    assert_eq!(code(&o), 64);
    assert!(String::from_utf8(o.stderr).unwrap().contains("m.txt:3:2:"));

    assert_eq!(code(&run(&["verify", "--code", "/nonexistent/x.json"])), 64);
    assert_eq!(code(&run(&["verify"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn family_and_matrix_checks() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "f.txt", "3\n1 2\n2\n3\n");
    let o = run(&["family", "--family", s(&f), "--check", "sperner"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["witness"], serde_json::json!({"contained": 2, "container": 1}));
    let o = run(&["family", "--family", s(&f), "--check", "cover-free", "-t", "1"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["witness"], serde_json::json!({"intersected": [2], "covering": [1]}));
    let o = run(&["family", "--family", s(&f), "--check", "shadow", "-r", "1"]);
    let mut members: Vec<Value> = json(&o)["shadow"]["members"].as_array().unwrap().clone();
    members.sort_by_key(|m| m.to_string());
    assert_eq!(members, vec![serde_json::json!([1]), serde_json::json!([2]), serde_json::json!([])]);

    let m = write(&d, "m.txt", "3 3\n100\n010\n001\n");
    let o = run(&["matrix", "--matrix", s(&m), "--check", "isolated"]);
    assert_eq!(json(&o)["isolated"][2], serde_json::json!({"column": 3, "row": 3}));
    let o = run(&["matrix", "--matrix", s(&m), "--check", "peel", "--column", "2"]);
    assert_eq!(json(&o)["result"], "2 2\n10\n01\n");
    let o = run(&["matrix", "--matrix", s(&m), "--check", "classify-square", "-t", "2"]);
    assert_eq!(json(&o)["class"]["perm"], serde_json::json!([1, 2, 3]));
    let m = write(&d, "dup.txt", "2 3\n110\n011\n");
    let o = run(&["matrix", "--matrix", s(&m), "--check", "disjunct", "-t", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["witness"], serde_json::json!({"column": 1, "cover": [2]}));
}

#[test]
fn output_is_identical_across_thread_counts_and_seeded() {
    let args = ["report", "-n", "3", "-t", "2", "-q", "3", "--wide", "--self-check", "200", "--seed", "11"];
    let outs: Vec<Vec<u8>> = ["1", "4", "8"]
        .iter()
        .map(|k| bin().env("FRAMEPROOF_THREADS", k).args(args).output().unwrap())
        .map(|o| {
            assert_eq!(o.status.code(), Some(0));
            o.stdout
        })
        .collect();
    assert!(outs.windows(2).all(|w| w[0] == w[1]));
    let v: Value = serde_json::from_slice(&outs[0]).unwrap();
    assert_eq!(v["consistent"], true);
    assert_eq!(v["self_check"]["disagreements"], serde_json::json!([]));

    let o = bin().env("FRAMEPROOF_THREADS", "zero").args(["threshold", "--kind", "n_star", "-t", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn text_format_lists_fields() {
    let o = run(&["threshold", "--kind", "n_star", "-t", "1", "--cap", "6", "--format", "text"]);
    let out = stdout(&o);
    assert!(out.starts_with("schema: 1\ncommand: threshold\n"), "{out}");
    assert!(out.contains("result: {\"status\":\"found\",\"n\":4}"));
}
