use std::process::Command;

use delpezzo_cli::{run, ResultEnvelope};
use serde_json::Value;

fn json(args: &[&str]) -> Value {
    let (code, out) = run(std::iter::once("delpezzo").chain(args.iter().copied()));
    assert_eq!(code, 0, "{out}");
    serde_json::from_str(&out).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("delpezzo").chain(args.iter().copied())).0
}

#[test]
fn plane_quintic_codim() {
    let v = json(&["codim", "--surface", "P2", "--beta", "5"]);
    assert_eq!(v["exact_codim"], 4);
    assert_eq!(v["query"]["subcommand"], "codim");
    assert!(v.get("witness").is_none());
    let w = json(&["codim", "--surface", "P2", "--beta", "5", "--witness"]);
    assert!(w["witness"].is_object());
}

#[test]
fn cubic_surface_lines() {
    assert_eq!(json(&["lines", "--surface", "S6"])["count"], 27);
    let listed = json(&["lines", "--surface", "S6", "--list"]);
    assert_eq!(listed["curves"].as_array().unwrap().len(), 27);
}

#[test]
fn stable_betti_table() {
    let v = json(&["stable-betti", "--surface", "S1", "--max-k", "6"]);
    assert_eq!(v["betti"]["2"], 3);
    assert_eq!(v["betti"]["3"], 0);
}

#[test]
fn envelope_round_trips() {
    let cases: &[&[&str]] = &[
        &["surface", "--surface", "S3"],
        &["rr", "--surface", "S1", "--beta", "0,1"],
        &["genus", "--surface", "P1xP1", "--beta", "3,2"],
        &["codim", "--surface", "S1", "--beta", "7,-2", "--witness"],
        &["check-a", "--surface", "P2", "--beta", "5", "--i", "4", "--relaxed"],
        &["check-p", "--surface", "P2", "--beta", "4"],
        &["min-n", "--surface", "P2", "--beta", "1", "--i", "4"],
        &["betti", "--surface", "P2", "--m", "3"],
        &["moduli-betti", "--surface", "P2", "--beta", "5", "--k-range", "0..4"],
        &["moduli-dim", "--surface", "P2", "--beta", "4"],
        &["jac-degree", "--surface", "P2", "--beta", "4", "--chi", "1"],
        &["picard-bound", "--surface", "P1xP1", "--beta", "2,2"],
        &["bps", "--max-total", "8", "--d", "5"],
        &["taut-count", "--surface", "S2", "--k", "3"],
        &["gap", "--chi-o", "1", "--q", "2", "--k2", "3", "--n", "2"],
    ];
    for args in cases {
        let v = json(args);
        let env: ResultEnvelope = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(serde_json::to_value(&env).unwrap(), v, "{args:?}");
    }
}

#[test]
fn sampled_very_ampleness() {
    let v = json(&["check-a", "--surface", "S1", "--beta", "3,-1", "--i", "2", "--verify-samples", "30"]);
    assert_eq!(v["very_ample_sampled"]["consistent"], false);
    assert_eq!(v["very_ample_sampled"]["failure"], "exceptional");
    let v = json(&["check-a", "--surface", "P2", "--beta", "4", "--i", "3", "--verify-samples", "30"]);
    assert_eq!(v["very_ample_sampled"]["consistent"], true);
}

#[test]
fn json_is_deterministic() {
    let args = ["delpezzo", "codim", "--surface", "P1xP1", "--beta-range", "1..3,1..3"];
    assert_eq!(run(args), run(args));
}

#[test]
fn sweep_keeps_input_order() {
    let v = json(&["codim", "--surface", "P1xP1", "--beta-range", "1..6,1..6"]);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 36);
    for (idx, r) in results.iter().enumerate() {
        let (a1, a2) = (idx as i64 / 6 + 1, idx as i64 % 6 + 1);
        assert_eq!(r["beta"], serde_json::json!([a1, a2]));
        assert_eq!(r["exact_codim"], a1.min(a2));
    }
}

#[test]
fn certified_flags_pass_through() {
    let v = json(&["picard-bound", "--surface", "P2", "--beta", "4"]);
    assert_eq!(v["bound"], 2);
    assert_eq!(v["certified"]["picard_bound"], true);
    let v = json(&["picard-bound", "--surface", "P2", "--beta", "2"]);
    assert_eq!(v["certified"]["picard_bound"], false);
    let v = json(&["gap", "--chi-o", "1", "--q", "0", "--k2", "1", "--n", "3"]);
    assert_eq!(v["certified"]["reducible"], false);
    let v = json(&["check-a", "--surface", "P2", "--beta", "5", "--i", "8", "--relaxed"]);
    assert_eq!(v["certified"]["A_8_relaxed"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["codim", "--surface", "S9", "--beta", "1"]), 1);
    assert_eq!(code(&["codim", "--surface", "P2", "--beta", "1,2"]), 1);
    assert_eq!(code(&["codim", "--surface", "P2", "--beta", "x"]), 1);
    assert_eq!(code(&["stable-betti", "--surface", "P2", "--max-k", "-3"]), 1);
    assert_eq!(code(&["no-such-command"]), 1);
    assert_eq!(code(&["gap", "--chi-o", "1", "--q", "-1", "--k2", "1", "--n", "2"]), 1);
    assert_eq!(code(&["moduli-dim", "--surface", "S1", "--beta", "0,1"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn csv_and_table_formats() {
    let (c, out) = run(["delpezzo", "stable-betti", "--surface", "P2", "--max-k", "4", "--format", "csv"]);
    assert_eq!(c, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(out.contains("betti.2,2\n"));
    assert!(out.contains("betti.4,6\n"));

    let (c, out) = run(["delpezzo", "bps", "--max-total", "4", "--format", "table"]);
    assert_eq!(c, 0);
    assert!(out.contains("  4  1 1 2 1 1"), "{out}");

    for sub in [&["surface", "--surface", "S8"][..], &["gap", "--chi-o", "2", "--q", "1", "--k2", "2", "--n", "2"]] {
        for fmt in ["table", "csv", "json"] {
            let argv: Vec<&str> = ["delpezzo"].into_iter().chain(sub.iter().copied()).chain(["--format", fmt]).collect();
            assert_eq!(run(argv).0, 0);
        }
    }
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["betti", "--surface", "S2", "--m", "4", "--cache-dir", d];
    let first = json(&args);
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();

    let second = json(&args);
    assert_eq!(first["betti"], second["betti"]);
    assert!(second["warnings"].as_array().unwrap().is_empty());

    // flip the b₂ probe coefficient
    let mut entry: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    for term in entry["series"]["coeffs"].as_array_mut().unwrap() {
        if term["e"] == serde_json::json!([2, 1]) {
            term["c"] = Value::from("99");
        }
    }
    std::fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
    let third = json(&args);
    assert_eq!(first["betti"], third["betti"]);
    assert!(third["warnings"][0].as_str().unwrap().contains("corrupt"));

    std::fs::write(&path, b"not json").unwrap();
    let fourth = json(&args);
    assert_eq!(first["betti"], fourth["betti"]);
    assert_eq!(fourth["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn binary_honours_cache_env() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .args(["stable-betti", "--surface", "P2", "--max-k", "8"])
        .env("DELPEZZO_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let bad = Command::new(env!("CARGO_BIN_EXE_delpezzo"))
        .args(["lines", "--surface", "Q"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown surface"));
}
