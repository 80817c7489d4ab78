use std::fs;

use funjohn::cli::{run_command, EXIT_CERTIFICATE, EXIT_PARSE, EXIT_PASS, EXIT_PRECONDITION};
use funjohn::config::ProblemConfig;
use funjohn::decomp::{verify_decomposition, DecompositionRecord};
use serde_json::Value;

fn fjohn(args: &[&str]) -> i32 {
    run_command(std::iter::once("fjohn").chain(args.iter().copied()))
}

fn report(dir: &std::path::Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn gen_decomp_writes_a_valid_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(fjohn(&["gen-decomp", "--d", "2", "--seed", "7", "--out", out]), EXIT_PASS);
    let rec: DecompositionRecord = serde_json::from_str(&fs::read_to_string(dir.path().join("decomposition.json")).unwrap()).unwrap();
    assert!(verify_decomposition(&rec.to_decomposition().unwrap(), 1e-10).passed);

    let input = dir.path().join("decomposition.json");
    let out2 = dir.path().join("verify");
    assert_eq!(
        fjohn(&["verify-decomp", "--input", input.to_str().unwrap(), "--tol", "1e-10", "--out", out2.to_str().unwrap()]),
        EXIT_PASS
    );
    let out3 = dir.path().join("bump");
    assert_eq!(fjohn(&["bump", "--input", input.to_str().unwrap(), "--out", out3.to_str().unwrap()]), EXIT_PASS);
}

#[test]
fn john_check_on_two_point_bump() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bump_d1.cfg");
    fs::write(&cfg, r#"{"f": {"variant": "bump", "anchors": [[0.7071067811865476], [-0.7071067811865476]]}}"#).unwrap();
    let out = dir.path().join("out");
    assert_eq!(fjohn(&["john-check", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), EXIT_PASS);
    let r = report(&out);
    let min = r["results"]["polar_floor"]["min_value"].as_f64().unwrap();
    assert!(min >= (-2.0f64).exp());
}

#[test]
fn lowner_check_lists_unit_probe_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(fjohn(&["lowner-check", "--kind", "expnorm", "--p", "2", "--out", out]), EXIT_PASS);
    let r = report(dir.path());
    let vals: Vec<f64> = r["results"]["probe_values"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(vals, vec![1.0, 1.0, 1.0, 1.0]);
}

#[test]
fn exit_codes() {
    assert_eq!(fjohn(&["no-such-command"]), EXIT_PARSE);
    assert_eq!(fjohn(&["gen-decomp", "--d", "2"]), EXIT_PARSE);
    assert_eq!(fjohn(&["john-check", "--config", "/nonexistent/cfg.json"]), EXIT_PARSE);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(fjohn(&["fixed-height", "--d", "1", "--seed", "1", "--xi", "99", "--out", out]), EXIT_PRECONDITION);
    assert_eq!(fjohn(&["gen-decomp", "--d", "0", "--seed", "1", "--out", out]), EXIT_PRECONDITION);
    // The John position of 10 h is 10 h itself.
    let cfg = dir.path().join("ten.cfg");
    fs::write(
        &cfg,
        r#"{"f": {"variant": "positioned", "inner": {"variant": "height", "dim": 1}, "position": {"alpha": 10.0, "matrix": [[1.0]], "shift": [0.0]}}, "seed": 2}"#,
    )
    .unwrap();
    assert_eq!(fjohn(&["solve-john", "--config", cfg.to_str().unwrap(), "--restarts", "2", "--out", out]), EXIT_PASS);
    // h/2 is not above h.
    let half = dir.path().join("half.cfg");
    fs::write(
        &half,
        r#"{"f": {"variant": "positioned", "inner": {"variant": "height", "dim": 1}, "position": {"alpha": 0.5, "matrix": [[1.0]], "shift": [0.0]}}}"#,
    )
    .unwrap();
    assert_eq!(fjohn(&["john-check", "--config", half.to_str().unwrap(), "--out", out]), EXIT_CERTIFICATE);
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = dir.path().to_str().unwrap();
        assert_eq!(fjohn(&["solve-john", "--d", "2", "--seed", "4", "--restarts", "4", "--out", out]), EXIT_PASS);
    }
    let (mut ra, mut rb) = (report(a.path()), report(b.path()));
    assert_eq!(ra["determinism_hash"], rb["determinism_hash"]);
    ra.as_object_mut().unwrap().remove("wall_clock_seconds");
    rb.as_object_mut().unwrap().remove("wall_clock_seconds");
    assert_eq!(ra, rb);
    let cfg: ProblemConfig = serde_json::from_value(ra["config"].clone()).unwrap();
    assert_eq!(ProblemConfig::from_json(&cfg.to_json()).unwrap(), cfg);
}

#[test]
fn height_curve_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        fjohn(&["height-curve", "--d", "1", "--seed", "1", "--alphas", "0.2,0.5,1.0", "--out", out]),
        EXIT_PASS
    );
    let csv = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,t,psi,phi,feasible,max_violation"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn remaining_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(fjohn(&["polar", "--d", "2", "--p", "-0.1,0.2", "--out", out]), EXIT_PASS);
    assert_eq!(fjohn(&["sandwich", "--d", "2", "--seed", "3", "--out", out]), EXIT_PASS);
    assert_eq!(fjohn(&["fixed-height", "--d", "1", "--seed", "3", "--xi", "1", "--out", out]), EXIT_PASS);
    assert_eq!(fjohn(&["corpus", "--only", "1,9", "--out", out]), EXIT_PASS);
    let r = report(dir.path());
    assert_eq!(r["results"]["criteria"].as_array().unwrap().len(), 2);
}
