use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semirandom-hc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"], &["simulate", "--help"]] {
        assert_eq!(bin(args).status.code(), Some(0), "{args:?}");
    }
    let help = String::from_utf8(bin(&["--help"]).stdout).unwrap();
    for sub in ["simulate", "ode", "compare", "verify"] {
        assert!(help.contains(sub));
    }
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(bin(&["simulate", "--bogus"]).status.code(), Some(1));
    assert_eq!(bin(&["simulate", "--cap", "4"]).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    let tiny = bin(&["verify", "--n", "2"]);
    assert_eq!(tiny.status.code(), Some(1));
    assert!(!tiny.stderr.is_empty());
}

#[test]
fn ode_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["ode", "--cap", "3", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json(&dir.path().join("ode_summary.json"));
    let tau = summary["tau_star"].as_f64().unwrap();
    assert!((tau - 1.8461).abs() < 1e-3, "{tau}");
    assert!(dir.path().join("ode_cap3.csv").exists());
    assert!(dir.path().join("ode_chart.svg").exists());
}

#[test]
fn simulate_and_verify_small_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = bin(&["simulate", "--n", "2000", "--trials", "3", "--seed", "7", "--out-dir", d]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&dir.path().join("summary.json"));
    assert_eq!(summary["trials"].as_array().unwrap().len(), 3);
    for seed in 7..10 {
        assert!(dir.path().join(format!("trials/trial_{seed}.csv")).exists());
    }

    let out = bin(&["verify", "--n", "500", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());

    let out = bin(&["simulate", "--n", "500", "--trials", "2", "--mode", "main-phase", "--pairing", "off", "--cap", "2", "--out-dir", d]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn compare_writes_joined_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["compare", "--n", "3000", "--trials", "2", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    for f in ["compare.csv", "compare.json", "compare.svg", "summary.json", "ode_summary.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let report = json(&dir.path().join("compare.json"));
    assert!(report["max_deviation"]["p"].as_f64().unwrap() < 0.05);
}

#[test]
fn runs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = bin(&["simulate", "--n", "1000", "--trials", "2", "--out-dir", d.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["summary.json", "mean.csv", "chart.svg", "trials/trial_0.csv"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}
