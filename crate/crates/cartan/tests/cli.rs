use std::fs;
use std::process::Command;

use cartan::json::encode_derivation;
use cartan_core::slices::delta_eps;
use cartan_core::special::sigma_embed;
use cartan_core::{Ambient, Field};
use serde_json::{json, Value};

fn cartan(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn inspect(v: &Value) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("element.json");
    fs::write(&path, v.to_string()).unwrap();
    let out = cartan(&["inspect", path.to_str().unwrap()]);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn passing_suite_exits_zero_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cartan(&[
        "suite", "--suite", "dimensions", "--p", "5", "--n", "3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["suite"], "dimensions");
    assert_eq!(report["params"]["n"], 3);
    assert!(report["elapsed_ms"].is_u64());
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
}

#[test]
fn report_goes_to_stdout_without_out() {
    let out = cartan(&["suite", "--suite", "charpoly-shape", "--trials", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["params"]["trials"], 3);
    assert_eq!(report["params"]["rng"], "chacha8/v1");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["suite", "--suite", "unknown"][..],
        &["suite", "--suite", "dimensions", "--p", "4"],
        &["suite", "--suite", "dimensions", "--p", "3"],
        &["suite", "--suite", "dimensions", "--n", "1"],
        &["suite", "--suite", "dimensions", "--jobs", "0"],
        &["suite"],
        &["frobnicate"],
    ] {
        assert_eq!(cartan(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn inspect_partial_derivative() {
    let (code, out, _) = inspect(&json!({"type": "derivation", "p": 5, "n": 2, "comps": [[1], []]}));
    assert_eq!(code, 0);
    assert!(out.contains("nilpotent: true"));
    assert!(out.contains("Phi: (0, 0)"));
    assert!(out.contains("U1: false\nU2: false\nU3: false"));
}

#[test]
fn inspect_embedded_slice_point() {
    let f = Field::prime(5).unwrap();
    let x = sigma_embed(&delta_eps(Ambient::new(f, 2).unwrap(), &[1, 2]).unwrap()).unwrap();
    let (code, out, _) = inspect(&encode_derivation(&x, true));
    assert_eq!(code, 0);
    assert!(out.contains("S_n membership: in S_n"), "{out}");
    assert!(out.contains("Phi_S: (1, 2)"), "{out}");
}

#[test]
fn inspect_zero() {
    let (code, out, _) = inspect(&json!({"type": "derivation", "p": 5, "n": 2, "comps": [[], []]}));
    assert_eq!(code, 0);
    assert!(out.contains("Phi: (0, 0)"));
    assert!(out.contains("nilpotent: true"));
    assert!(out.contains("filtration degree: none"));
}

#[test]
fn inspect_other_elements() {
    let (code, out, _) = inspect(&json!({"kind": "delta_eps", "p": 5, "n": 2, "eps": [1, 0]}));
    assert_eq!(code, 0);
    assert!(out.contains("Phi: (1, 0)"), "{out}");
    assert!(out.contains("U1: true"), "{out}");
    let (code, out, _) = inspect(&json!({
        "type": "automorphism", "p": 5, "n": 2,
        "images": [[0, 1, 0, 0, 0, 1], [0, 0, 0, 0, 0, 1]]
    }));
    assert_eq!(code, 0);
    assert!(out.contains("special: true"), "{out}");
}

#[test]
fn inspect_parse_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"type\": [1,\n").unwrap();
    let out = cartan(&["inspect", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = inspect(&json!({"type": "derivation", "p": 5, "n": 2, "comps": [[1], "x"]}));
    assert_eq!(code, 2);
    assert!(err.contains("$.comps[1]"), "{err}");
}
