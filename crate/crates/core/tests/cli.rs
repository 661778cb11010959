use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_matryoshka"));
    cmd.env_remove("MATRYOSHKA_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

#[test]
fn check_is_byte_deterministic() {
    let args = ["--json", "check", "--n", "2", "--trials", "100", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["ok"], true);
    assert_eq!(report["seed"], 7);
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["--json", "check", "--n", "2", "--trials", "5", "--property", "obstate"];
    let from_env = bin().args(args).env("MATRYOSHKA_SEED", "42").output().unwrap();
    let from_flag = run(&[&args[..], &["--seed", "42"]].concat());
    assert_eq!(from_env.stdout, from_flag.stdout);
    let report: Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(report["seed"], 42);
}

#[test]
fn different_seeds_give_different_reports() {
    let base = ["--json", "check", "--n", "2", "--trials", "5", "--property", "algebra.trace_conjugation"];
    let a = run(&[&base[..], &["--seed", "1"]].concat());
    let b = run(&[&base[..], &["--seed", "2"]].concat());
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn failing_check_exits_nonzero_with_a_reproducer() {
    let out = run(&["--json", "check", "--n", "2", "--trials", "3", "--tol", "0", "--property", "algebra.trace_conjugation"]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let repro = report["properties"][0]["example_failure"]["reproducer"].as_str().unwrap();
    assert!(repro.starts_with("matryoshka check --property algebra.trace_conjugation --n 2"));
}

#[test]
fn expect_on_the_bundled_obstate() {
    let v = json(&["expect", &data("example_obstate.json")]);
    assert!((v["expectation"]["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["variance"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(v["positive"], true);
}

#[test]
fn crossratio_float_and_exact() {
    let v = json(&["crossratio", "0", "1", "2", "3"]);
    assert!((v["value"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    let out = run(&["crossratio", "0", "1", "2", "3", "--backend", "exact"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "4/3");
    let inf = run(&["crossratio", "5", "1", "0", "inf", "--backend", "exact"]);
    assert_eq!(String::from_utf8_lossy(&inf.stdout).trim(), "5");
    let neg = run(&["crossratio", "-1", "1", "0", "inf"]);
    assert_eq!(String::from_utf8_lossy(&neg.stdout).trim(), "-1");
}

#[test]
fn classical_subcommands() {
    let v = json(&["classical", "cyclic", "0", "1", "inf"]);
    assert_eq!(v["cyclic"], true);
    let dir = std::env::temp_dir().join(format!("matryoshka-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    };
    let mu = write("mu.csv", "1, 2, 0.5\n");
    let f = write("f.csv", "1, -2, 0.5\n");
    let g = write("g.json", r#"{"m": 3, "values": [0.2, 0.3, 0.5]}"#);
    let v = json(&["classical", "pairing", &mu, &f, &g]);
    assert!((v["value"].as_f64().unwrap() + 0.875).abs() < 1e-12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn malformed_input_reports_the_location() {
    let dir = std::env::temp_dir().join(format!("matryoshka-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\n  \"A\": [1,\n").unwrap();
    let out = run(&["expect", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["check", "--backend", "quantum"]).status.code(), Some(2));
    assert_eq!(run(&["crossratio", "1", "2"]).status.code(), Some(2));
    assert_eq!(run(&["expect", "/nonexistent.json"]).status.code(), Some(1));
}
