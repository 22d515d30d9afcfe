use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gammak(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gammak"));
    for (k, _) in std::env::vars() {
        if k.starts_with("GAMMAK_") {
            cmd.env_remove(k);
        }
    }
    cmd.args(args).envs(env.iter().copied()).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gammak(&all, &[]);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn validate_separates_valid_corrupt_and_malformed() {
    let (code, v) = json(&["validate", &fixture("boolean.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);

    let (code, v) = json(&["validate", &fixture("corrupted_mu.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["reason"], "axiom-violation");
    assert!(v["violations"][0]["witness"]["t"].is_array());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "arity": 2, "t_elems": ["0"]"#).unwrap();
    let (code, v) = json(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["reason"], "parse-error");
}

#[test]
fn rectangular_structure_validates() {
    let (code, v) = json(&["validate", &fixture("rectangular_1_2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["structure"]["t_size"], 4);
    assert_eq!(v["structure"]["gamma_size"], 4);
}

#[test]
fn invariants_of_small_fields() {
    let (code, v) = json(&["k0", "modular(2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["group"], serde_json::json!({"rank": 1, "torsion": []}));
    assert_eq!(v["completeness"]["complete"], true);

    let (code, v) = json(&["k1", "modular(3)"]);
    assert_eq!(code, 0);
    assert_eq!(v["group"]["torsion"], serde_json::json!([2]));
    assert_eq!(v["stationarity"]["stationary"], true);
}

#[test]
fn reports_match_golden_files() {
    for (args, golden) in [
        (&["k0", "boolean"][..], "k0_boolean.golden.json"),
        (&["k1", "modular(3)"][..], "k1_modular3.golden.json"),
    ] {
        let mut all = args.to_vec();
        all.extend(["--format", "json"]);
        let out = gammak(&all, &[]);
        let want = std::fs::read_to_string(fixture(golden)).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "{args:?}");
    }
}

#[test]
fn builtin_dump_round_trips() {
    let out = gammak(&["builtin", "boolean"], &[]);
    let want = std::fs::read_to_string(fixture("boolean.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn euler_characteristic_of_complexes() {
    let (code, v) = json(&["euler", "modular(2)", &fixture("contractible_f2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["chi_is_zero"], true);

    let (_, v) = json(&["euler", "modular(2)", &fixture("point_f2.json")]);
    assert_eq!(v["chi"], serde_json::json!([1]));
}

#[test]
fn check_suites_exit_codes() {
    assert_eq!(json(&["check", "matrix-morita", "--base", "modular(2)"]).0, 0);
    assert_eq!(json(&["check", "additivity", "--trials", "100", "--seed", "7"]).0, 0);

    let (code, v) = json(&["check", "triangular", "--base", "boolean", "--skip-k1"]);
    assert_eq!(code, 4);
    assert_eq!(v["reason"], "theorem-violation");

    let (code, _) = json(&["check", "triangular", "--base", "modular(2)", "--skip-k1"]);
    assert_eq!(code, 0);
}

#[test]
fn projection_hom_induces_a_k0_map() {
    let dir = tempfile::tempdir().unwrap();
    let pi = dir.path().join("pi.json");
    let out = gammak(&["construct", "projection", "modular(2)", "--size", "2"], &[]);
    assert!(out.status.success());
    std::fs::write(&pi, out.stdout).unwrap();
    let (code, v) = json(&["map", pi.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["valid"], true);
    assert_eq!(v["k0"]["map"]["is_iso"], true);
}

#[test]
fn settings_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"caps": {"rank": 1}, "seed": 11}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let run = |args: &[&str], env: &[(&str, &str)]| -> Value {
        let mut all = vec!["k0", "modular(2)", "--format", "json"];
        all.extend(args);
        serde_json::from_slice(&gammak(&all, env).stdout).unwrap()
    };
    let v = run(&["--config", cfg], &[]);
    assert_eq!(v["config"]["caps"]["rank"], 1);
    assert_eq!(v["config"]["seed"], 11);
    let v = run(&["--config", cfg], &[("GAMMAK_CAP_RANK", "3"), ("GAMMAK_SEED", "5")]);
    assert_eq!(v["config"]["caps"]["rank"], 3);
    assert_eq!(v["config"]["seed"], 5);
    let v = run(&["--config", cfg, "--cap-rank", "2"], &[("GAMMAK_CAP_RANK", "3")]);
    assert_eq!(v["config"]["caps"]["rank"], 2);
    let v = run(&[], &[]);
    assert_eq!(v["config"]["seed"], 7);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"caps": {"carrier": 4}, "bogus": 1}"#).unwrap();
    let out = gammak(&["k0", "boolean", "--config", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(1));

    let out = gammak(&["k0", "boolean", "--cap-rank", "0"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn carrier_cap_is_loud() {
    let (code, v) = json(&["k0", "modular(3)", "--cap-carrier", "2"]);
    assert_eq!(code, 3);
    assert_eq!(v["reason"], "cap-exceeded");
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["k0", "boolean", "--format", "json"][..],
        &["k1", "boolean", "--format", "json"][..],
        &["check", "additivity", "--trials", "20", "--format", "json"][..],
    ] {
        let a = gammak(args, &[]);
        let b = gammak(args, &[]);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}
