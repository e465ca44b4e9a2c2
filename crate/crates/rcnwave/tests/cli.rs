//! Exit-code and output contract of the command line front end.
//!
//! 0 = success, 1 = usage/schema problems, 2 = a mathematical condition
//! failed, 3 = a numerical failure.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rcnwave"))
}

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn uncertainty_pair_is_exact_compact_json() {
    let out = run(&["uncertainty", "--n1", "1", "--n2", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"num":7,"den":8}"#);
}

#[test]
fn uncertainty_needs_a_pair_or_min() {
    let out = run(&["uncertainty", "--n1", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn self_adjoint_boundary_case_splits_cleanly() {
    assert_eq!(run(&["self-adjoint", "--n", "5", "--alpha", "1.25"]).status.code(), Some(0));
    assert_eq!(run(&["self-adjoint", "--n", "5", "--alpha", "1.26"]).status.code(), Some(2));
}

#[test]
fn misspelled_scenario_key_exits_one_and_names_it() {
    let dir = std::env::temp_dir().join("rcnwave_cli_badkey");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema":"rcnwave/1","potentail":{"kind":"minkowski","dimension":1}}"#,
    )
    .unwrap();
    let out = run(&["tau", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("potentail"), "diagnostic names the bad key: {err}");
}

#[test]
fn unknown_subcommand_exits_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn tau_emits_csv_for_requested_radii() {
    let out = run(&[
        "tau",
        "--scenario",
        scenario("power_singular_window.json").to_str().unwrap(),
        "--r-values",
        "0.1",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,tau"));
    // tau = 5 r^2 anchored at r = 0.05: tau(0.1) = 0.0375.
    let row: Vec<f64> =
        lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[1] - 0.0375).abs() < 1e-10, "got {row:?}");
}

#[test]
fn rcn_check_flags_infeasible_windows_with_exit_two() {
    let dir = std::env::temp_dir().join("rcnwave_cli_infeasible");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("beta02.json");
    std::fs::write(
        &path,
        r#"{
  "schema": "rcnwave/1",
  "potential": { "kind": "power_singular", "alpha": 1.0, "beta": 0.2, "dimension": 3 },
  "grid": { "coordinate": "r", "lo": 0.05, "hi": 1.0, "cells": 64 },
  "time": { "t_end": 0.1, "cfl_fraction": 0.5 },
  "initial": { "u0": { "shape": "bump", "center": 0.5, "width": 0.1 } }
}"#,
    )
    .unwrap();
    let ok = run(&[
        "rcn-check",
        "--scenario",
        scenario("power_singular_window.json").to_str().unwrap(),
        "--window",
        "0.0",
        "1.0",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["rcn-check", "--scenario", path.to_str().unwrap(), "--window", "0.0", "1.0"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn simulate_honors_env_override_and_writes_reports() {
    let dir = std::env::temp_dir().join("rcnwave_cli_sim");
    let _ = std::fs::remove_dir_all(&dir);
    let out = bin()
        .args(["simulate", "--scenario", scenario("minkowski_cone.json").to_str().unwrap()])
        .env("RCNWAVE_OUT", &dir)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["snapshot_final.csv", "energy.csv", "checks.json", "run.json"] {
        assert!(dir.join(file).exists(), "missing {file}");
    }
    let checks: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("checks.json")).unwrap()).unwrap();
    for report in checks.as_array().unwrap() {
        assert_eq!(report["pass"], serde_json::Value::Bool(true), "{report}");
    }
    let snapshot = std::fs::read_to_string(dir.join("snapshot_final.csv")).unwrap();
    assert!(snapshot.starts_with("r,tau,u,ut\n"));
    let energy = std::fs::read_to_string(dir.join("energy.csv")).unwrap();
    assert!(energy.starts_with("t,E_total,E_kinetic,E_gradient,E_potential\n"));
}

#[test]
fn simulate_failed_check_exits_two() {
    let dir = std::env::temp_dir().join("rcnwave_cli_halfspeed");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("half.json");
    // A half-speed cone is a wrong claim about the propagation speed, so the
    // declared check must fail.
    std::fs::write(
        &path,
        r#"{
  "schema": "rcnwave/1",
  "potential": { "kind": "minkowski", "dimension": 1 },
  "v_minus_equals_q": false,
  "grid": { "coordinate": "r", "lo": 0.1, "hi": 20.1, "cells": 256 },
  "time": { "t_end": 8.0, "cfl_fraction": 1.0 },
  "initial": { "u0": { "shape": "bump", "center": 10.0, "width": 0.5 } },
  "checks": [ { "type": "cone", "speed": 0.5, "tol": 1e-8 } ]
}"#,
    )
    .unwrap();
    let out = bin()
        .args(["simulate", "--scenario", path.to_str().unwrap()])
        .env("RCNWAVE_OUT", dir.join("out"))
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_blowup_exits_three() {
    let dir = std::env::temp_dir().join("rcnwave_cli_blowup");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("blowup.json");
    // Strongly supercritical focusing weight: the attractive coupling wins
    // and the run must stop with a numerical-failure code.
    std::fs::write(
        &path,
        r#"{
  "schema": "rcnwave/1",
  "potential": { "kind": "power_singular", "alpha": 1.0, "beta": 5.0, "dimension": 1 },
  "grid": { "coordinate": "tau", "lo": 0.0, "hi": 0.1, "cells": 64 },
  "time": { "t_end": 40.0, "cfl_fraction": 0.5 },
  "initial": { "u0": { "shape": "bump", "center": 0.05, "width": 0.02 } }
}"#,
    )
    .unwrap();
    let out = bin()
        .args(["simulate", "--scenario", path.to_str().unwrap()])
        .env("RCNWAVE_OUT", dir.join("out"))
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn spacetime_cone_is_symmetric_about_emission() {
    let out = run(&[
        "spacetime", "--model", "schwarzschild:1:1", "--op", "cone", "--t0", "2.0", "--r", "3.0",
        "4.0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[0][1], 2.0); // emission point: both rays meet at t0
    assert_eq!(rows[0][2], 2.0);
    assert!((rows[1][1] + rows[1][2] - 4.0).abs() < 1e-12);
}

#[test]
fn dirichlet_respects_boundary_conditions() {
    let out = run(&[
        "dirichlet",
        "--scenario",
        scenario("power_singular_window.json").to_str().unwrap(),
        "--rho-spec",
        "one",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.first().unwrap()[2], 0.0);
    assert_eq!(rows.last().unwrap()[2], 0.0);
    assert!(rows.iter().any(|r| r[2] != 0.0));
}

#[test]
fn forms_self_adjoint_matches_subcommand() {
    assert_eq!(
        run(&["forms", "--check", "self-adjoint", "--n", "4", "--alpha", "0.0"]).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&["forms", "--check", "self-adjoint", "--n", "3", "--alpha", "0.0"]).status.code(),
        Some(2)
    );
}

#[test]
fn deterministic_output_across_runs() {
    let path = scenario("power_singular_window.json");
    let args = ["rcn-check", "--scenario", path.to_str().unwrap(), "--window", "0.0", "1.0"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}
