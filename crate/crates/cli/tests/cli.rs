use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const SMALL: &str = "\
name = A1
vars = x, y
f = x^2 + y^2
expect_mu = 1
expect_tau = 1
expect_icis = true
tags = ADE, plane-curve, quasi-homogeneous

name = A2
vars = x, y
f = x^3 + y^2
expect_mu = 2
expect_tau = 2
expect_e_crit = 2
tags = ADE, plane-curve, quasi-homogeneous

name = E6
vars = x, y
f = x^3 + y^4
expect_mu = 6
tags = ADE, plane-curve, quasi-homogeneous
";

fn milnor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_milnor")).args(args).output().unwrap()
}

fn corpus_file(dir: &Path, text: &str) -> String {
    let path = dir.join("input.corpus");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn ade_corpus_passes_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let file = corpus_file(dir.path(), SMALL);
    let out = milnor(&["run", &file]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 3);
    assert_eq!(reports[2]["name"], "E6");
    assert_eq!(reports[2]["mu_exact"], 6);
    assert!(reports[2]["checks"]["jet_tjurina_exact"]["holds"].as_bool().unwrap());
    assert!(String::from_utf8_lossy(&out.stderr).contains("3 of 3 entries passed"));
}

#[test]
fn bundled_corpus_passes_without_jets() {
    let out = milnor(&["run", "--bundled", "--checks", "bounds,inequality", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 26);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn wrong_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = corpus_file(dir.path(), "name = X2Y\nvars = x, y\nf = x^2*y\nexpect_icis = true\n");
    let out = milnor(&["run", &file, "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().nth(1).unwrap().ends_with(",fail"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expect_icis"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = corpus_file(dir.path(), "");
    assert_eq!(milnor(&["run", &empty]).status.code(), Some(2));
    assert_eq!(milnor(&["run", "/nonexistent/file.corpus"]).status.code(), Some(2));
    let bad = corpus_file(dir.path(), "name = B\nvars = x, y\nf = x^2 +\n");
    let out = milnor(&["run", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input.corpus"));
    let good = corpus_file(dir.path(), SMALL);
    for args in [
        vec!["run", good.as_str(), "--window", "0"],
        vec!["run", good.as_str(), "--field", "4"],
        vec!["run", good.as_str(), "--checks", "everything"],
        vec!["run", good.as_str(), "--format", "xml"],
        vec!["run", good.as_str(), "--bundled"],
        vec!["run"],
    ] {
        assert_eq!(milnor(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn resource_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = corpus_file(dir.path(), "name = T\nvars = x, y\nf = x^4 + y^5 + x^2*y^2\n");
    let out = milnor(&["run", &file, "--step-budget", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let reports: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(reports[0]["error"]["kind"], "resource_cap");
}

#[test]
fn csv_has_header_and_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let file = corpus_file(dir.path(), SMALL);
    let out = milnor(&["run", &file, "--format", "csv", "--checks", "inequality"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,n,k,icis,mu,tau,e_crit,ratio,verdict");
    assert_eq!(lines[2], "A2,1,1,true,2,2,2,1.0,pass");
}

#[test]
fn json_is_deterministic_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let file = corpus_file(dir.path(), SMALL);
    let first = milnor(&["run", &file, "--checks", "bounds,inequality"]);
    let second = milnor(&["run", &file, "--checks", "bounds,inequality"]);
    let parallel = milnor(&["run", &file, "--checks", "bounds,inequality", "--jobs", "3"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, parallel.stdout);
    assert!(!stdout(&first).contains("timings"));
    let timed = milnor(&["run", &file, "--checks", "bounds", "--timings"]);
    assert!(stdout(&timed).contains("\"timings\""));
}

#[test]
fn reads_standard_input_and_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let mut child = Command::new(env!("CARGO_BIN_EXE_milnor"))
        .args([
            "run",
            "-",
            "--checks",
            "inequality",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(SMALL.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let reports: Value = serde_json::from_str(&fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(reports.as_array().unwrap().len(), 3);
}

#[test]
fn cross_check_agrees_over_a_prime() {
    let dir = tempfile::tempdir().unwrap();
    let file = corpus_file(dir.path(), SMALL);
    let out = milnor(&[
        "run",
        &file,
        "--checks",
        "inequality",
        "--cross-check",
        "--field",
        "32003",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(reports[1]["checks"]["cross_check_field"]["holds"].as_bool().unwrap());
}

#[test]
fn corpus_subcommand_prints_the_bundled_corpus() {
    let out = milnor(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.matches("name = ").count(), 25);
    assert!(text.contains("name = Z9"));
}
