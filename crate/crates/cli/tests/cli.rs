use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn checks(v: &Value) -> Vec<(String, String, String)> {
    v["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let s = |k: &str| c[k].as_str().unwrap().to_string();
            (s("name"), s("status"), s("detail"))
        })
        .collect()
}

#[test]
fn verify_passes_at_reference_parameters() {
    let out = fab(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["pass"], true);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    for c in v["result"]["checks"].as_array().unwrap() {
        assert!(!c["anchor"].as_str().unwrap().is_empty());
        let status = c["status"].as_str().unwrap();
        assert!(["pass", "discrepancy"].contains(&status), "{c}");
    }
    let names: Vec<String> = checks(&v).into_iter().map(|c| c.0).collect();
    for n in ["sigma-involution", "charpoly-pullback", "adjunction", "transition-table", "e-intervals-disjoint", "count-n2"] {
        assert!(names.iter().any(|m| m == n), "missing {n}");
    }
}

#[test]
fn verify_flags_nongeneric_parameter() {
    let out = fab(&["verify", "--a=-1/4"]);
    let v = json(&out);
    let c = checks(&v);
    let gen = c.iter().find(|c| c.0 == "genericity").unwrap();
    assert!(gen.2.contains("f^1"), "{gen:?}");
    let drop = c.iter().find(|c| c.0 == "degree-drop").unwrap();
    assert_eq!(drop.1, "pass");
}

#[test]
fn verify_skips_real_dynamics_at_b_zero() {
    let out = fab(&["verify", "--b", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let c = checks(&json(&out));
    for n in ["transition-table", "e-intervals-disjoint", "count-n1"] {
        let c = c.iter().find(|c| c.0 == n).unwrap();
        assert_eq!((c.1.as_str(), c.2.as_str()), ("skipped", "requires b ≠ 0"));
    }
}

#[test]
fn configuration_errors_exit_with_two() {
    assert_eq!(fab(&["degrees", "--a", "x"]).status.code(), Some(2));
    assert_eq!(fab(&["regions", "table", "--b", "0"]).status.code(), Some(2));
    assert_eq!(fab(&["sft", "nu", "--word", "35"]).status.code(), Some(2));
    assert_eq!(fab(&["degrees", "--config", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn degrees_and_spectrum() {
    let v = json(&fab(&["degrees", "--n", "4"]));
    let d: Vec<i64> = v["result"]["records"].as_array().unwrap().iter().map(|r| r["degree"].as_i64().unwrap()).collect();
    assert_eq!(d, [1, 3, 7, 16, 35]);
    let s = json(&fab(&["spectrum"]));
    assert!((s["result"]["rho"].as_f64().unwrap() - 2.1479).abs() < 1e-4);
    assert_eq!(s["result"]["charpoly_restricted"], serde_json::json!([-1, -2, -1, 1]));
}

#[test]
fn small_commands() {
    let v = json(&fab(&["regions", "classify", "--x", "3", "--y", "-1"]));
    assert_eq!(v["result"]["plus"], "R5+");
    let v = json(&fab(&["sft", "count", "--len", "5", "--first", "34", "--last", "3"]));
    assert_eq!(v["result"]["count"], "19");
    let v = json(&fab(&["basin", "--x", "5", "--y", "-1"]));
    assert_eq!(v["result"]["verdict"], "escapes-both");
    let v = json(&fab(&["code", "--x", "2.2808", "--y", "0.6404", "--k", "2"]));
    assert_eq!(v["result"]["word"], "33333");
    let v = json(&fab(&["arcs", "pullback", "--type", "3s", "--n", "1"]));
    assert_eq!(v["result"]["dominates"], true);
}

#[test]
fn output_is_deterministic() {
    let a = fab(&["intersections", "--n", "1", "--s", "0.4", "--t", "1.3"]);
    let b = fab(&["intersections", "--n", "1", "--s", "0.4", "--t", "1.3"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["result"]["count"], 5);
    assert_eq!(v["result"]["status"], "discrepancy");
}

#[test]
fn config_file_sets_parameters_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("run.json");
    std::fs::write(&p, r#"{"a": "-3", "b": "2", "seed": 11}"#).unwrap();
    let cfg = p.to_str().unwrap();
    let v1 = json(&fab(&["spectrum", "--config", cfg]));
    let v2 = json(&fab(&["spectrum", "--config", cfg]));
    assert_eq!(v1["params"]["a"], "-3");
    assert_eq!(v1["config_hash"], v2["config_hash"]);
    let v3 = json(&fab(&["spectrum", "--config", cfg, "--seed", "12"]));
    assert_ne!(v1["config_hash"], v3["config_hash"]);
}

fn read(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn report_all_writes_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = fab(&["report-all", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let deg = read(dir.path(), "degrees.json");
    let d: Vec<i64> = deg["result"]["records"].as_array().unwrap().iter().map(|r| r["degree"].as_i64().unwrap()).collect();
    assert_eq!(d[..4], [1, 3, 7, 16]);
    let sp = read(dir.path(), "spectrum.json");
    assert!((sp["result"]["rho"].as_f64().unwrap() - 2.1479).abs() < 1e-4);
    for f in ["regions.json", "intersections.json", "measure.json", "manifold.json"] {
        let v = read(dir.path(), f);
        assert_eq!(v["config_hash"], deg["config_hash"], "{f}");
        assert!(v["result"].get("error").is_none(), "{f}");
    }
    let svg = std::fs::read_to_string(dir.path().join("fig01.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    let csv = std::fs::read_to_string(dir.path().join("manifold.csv")).unwrap();
    assert!(csv.starts_with("curve,chart,c1,c2,rho,theta\n"));
}
