//! Process-level contract of the `lipfree` binary: stdout payloads, exit
//! codes (0 success, 1 failed check, 2 parse error, 3 infeasible instance),
//! and byte-determinism of the CSV output.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lipfree"))
}

fn write_problem(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn norm_dual_prints_the_distance() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "point.json",
        r#"{"norm": {"kind": "l2"}, "molecule": [{"point": [3.0, 4.0], "weight": 1.0}]}"#,
    );
    let out = bin().args(["norm", "--problem", &problem]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "5.000000000\n");
}

#[test]
fn norm_beckmann_on_an_interval_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "interval.json",
        r#"{
            "domain": {"shape": "box", "lo": [-2.0], "hi": [2.0]},
            "norm": {"kind": "l2"},
            "molecule": [{"point": [1.0], "weight": 1.0}],
            "grid": {"h": 0.25}
        }"#,
    );
    let out = bin()
        .args(["norm", "--problem", &problem, "--method", "beckmann"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "1.000000000\n");
}

#[test]
fn norm_both_reports_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "dipole.json",
        r#"{
            "domain": {"shape": "box", "lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
            "norm": {"kind": "l1"},
            "molecule": [
                {"point": [1.0, 0.0], "weight": 1.0},
                {"point": [0.0, 1.0], "weight": -1.0}
            ],
            "grid": {"h": 0.25, "alignment": "centered"}
        }"#,
    );
    let out = bin()
        .args(["norm", "--problem", &problem, "--method", "both"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "dual 2.000000000");
    assert_eq!(lines[1], "beckmann 2.000000000");
    assert_eq!(lines[2], "gap 0.000000000");
}

#[test]
fn malformed_files_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), "bad.json", "{\n  \"norm\": [}\n}");
    let out = bin().args(["norm", "--problem", &problem]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("column"), "stderr: {err}");
}

#[test]
fn unresolvable_atoms_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // at h = 0.5 no cell center of the unit ball sits in the atom's cell
    let problem = write_problem(
        dir.path(),
        "offgrid.json",
        r#"{
            "domain": {"shape": "ball", "center": [0.0, 0.0], "radius": 1.0},
            "norm": {"kind": "l2"},
            "molecule": [{"point": [0.7, 0.7], "weight": 1.0}],
            "grid": {"h": 0.5}
        }"#,
    );
    let out = bin()
        .args(["norm", "--problem", &problem, "--method", "beckmann"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn missing_files_fail_with_a_generic_error() {
    let out = bin()
        .args(["norm", "--problem", "/nonexistent/problem.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_reports_assertions_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "check.json",
        r#"{"battery": {"name": "isometry1d", "seed": 7}}"#,
    );
    let out = bin().args(["check", "--problem", &problem]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("battery isometry1d\n"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("pass")), "{text}");

    // unknown battery names are an error, not a failed report
    let out = bin()
        .args(["check", "--problem", &problem, "--battery", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // randomized batteries demand a seed from somewhere
    let unseeded = write_problem(
        dir.path(),
        "unseeded.json",
        r#"{"battery": {"name": "roundtrip"}}"#,
    );
    let out = bin().args(["check", "--problem", &unseeded]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["check", "--problem", &unseeded, "--seed", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn converge_emits_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "study.json",
        r#"{
            "domain": {"shape": "box", "lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
            "norm": {"kind": "l1"},
            "molecule": [
                {"point": [1.0, 0.0], "weight": 1.0},
                {"point": [0.0, 1.0], "weight": -1.0}
            ],
            "grid": {"alignment": "centered", "h_list": [0.5, 0.25], "k_list": []}
        }"#,
    );
    let run = || {
        let out = bin().args(["converge", "--problem", &problem]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        stdout(&out)
    };
    let first = run();
    let second = run();

    let strip_seconds = |csv: &str| -> Vec<String> {
        csv.lines()
            .map(|l| l.split(',').take(5).collect::<Vec<_>>().join(","))
            .collect()
    };
    assert_eq!(strip_seconds(&first), strip_seconds(&second));

    let lines: Vec<&str> = first.lines().collect();
    assert_eq!(lines[0], "h,k,primal,dual,gap,seconds");
    assert_eq!(lines.len(), 3);
    // on-grid one-norm instances are exact: every gap entry is zero
    for row in &lines[1..] {
        let gap: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
        assert!(gap.abs() <= 1e-9, "row {row}");
    }
}

#[test]
fn converge_with_empty_lists_prints_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "empty.json",
        r#"{
            "domain": {"shape": "box", "lo": [-2.0, -2.0], "hi": [2.0, 2.0]},
            "norm": {"kind": "l2"},
            "molecule": [{"point": [1.0, 0.0], "weight": 1.0}],
            "grid": {"h_list": [], "k_list": []}
        }"#,
    );
    let out = bin().args(["converge", "--problem", &problem]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "h,k,primal,dual,gap,seconds\n");
}

#[test]
fn converge_out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(
        dir.path(),
        "tofile.json",
        r#"{
            "domain": {"shape": "box", "lo": [-2.0], "hi": [2.0]},
            "norm": {"kind": "l2"},
            "molecule": [{"point": [1.0], "weight": 1.0}],
            "grid": {"h_list": [0.25]}
        }"#,
    );
    let target = dir.path().join("study.csv");
    let out = bin()
        .args(["converge", "--problem", &problem, "--out", target.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "", "CSV goes to the file, not stdout");
    let text = fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("h,k,primal,dual,gap,seconds\n"));
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("0.250000000,0,1.000000000,"));
}
