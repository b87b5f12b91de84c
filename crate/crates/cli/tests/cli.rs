//! End-to-end tests of the `ddeg` binary: exit codes, record schema,
//! determinism.

use std::process::{Command, Output};

fn ddeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn compute_exact_gives_exit_zero() {
    let out = ddeg(&["compute", "(x3 + x1*x2, x2 + x1^3, x1)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("2.302775637731994646559610633735"));
    assert!(text.contains("exact, proven"));
}

#[test]
fn compute_monomial_diagonal() {
    let out = ddeg(&["compute", "(x1^2, x2^3)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("3.0000"));
}

#[test]
fn non_dominant_input_is_exit_three() {
    let out = ddeg(&["compute", "(x1, x1^2)"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not dominant"));
    assert!(err.contains("Jacobian"));
}

#[test]
fn parse_error_is_exit_three_with_position() {
    let out = ddeg(&["compute", "(x1 + , x2)"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at byte"));
}

#[test]
fn records_mode_is_json_lines_with_schema() {
    let out = ddeg(&["--format", "records", "compute", "(x1^2 + x2, x1)"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let line = text.lines().next().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    assert_eq!(v["schema"], "ddeg.v1");
    assert_eq!(v["value"]["kind"], "exact");
    assert_eq!(v["value"]["exact"]["approx"], "2.000000000000000000000000000000");
}

#[test]
fn records_are_byte_identical_across_runs() {
    let a = stdout(&ddeg(&["--format", "records", "compute", "(x3 + x1*x2^3, x1, x2)"]));
    let b = stdout(&ddeg(&["--format", "records", "compute", "(x3 + x1*x2^3, x1, x2)"]));
    assert_eq!(a, b);
    assert!(!a.is_empty());
}

#[test]
fn enumerate_theorem1_degree_two() {
    let out = ddeg(&["--format", "records", "enumerate", "theorem1", "-d", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 4);
    let approxes: Vec<String> = text
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["value"]["approx"].as_str().unwrap()[..6].to_string()
        })
        .collect();
    assert_eq!(approxes, vec!["1.0000", "1.4142", "1.6180", "2.0000"]);
}

#[test]
fn enumerate_new_only_matches_table_row() {
    let out = ddeg(&[
        "--format", "records", "enumerate", "theorem1", "-d", "3", "--new-only",
    ]);
    assert_eq!(stdout(&out).lines().count(), 7);
    let out4 = ddeg(&[
        "--format", "records", "enumerate", "shiftlike", "-d", "4", "--new-only",
    ]);
    assert_eq!(stdout(&out4).lines().count(), 4);
}

#[test]
fn classify_weak_perron_quadratic() {
    let out = ddeg(&["--format", "records", "classify", "x^2-3*x+1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["weak_perron"], "yes");
    assert_eq!(v["handelman"]["verdict"], "no");
    assert_eq!(v["minimal_dimension"], 4);
}

#[test]
fn classify_handelman_quadratic() {
    let out = ddeg(&["--format", "records", "classify", "x^2-x-1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["handelman"]["verdict"], "yes");
    assert_eq!(v["minimal_dimension"], 3);
}

#[test]
fn classify_cubic_weak_perron() {
    let out = ddeg(&["--format", "records", "classify", "x^3-x-1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["weak_perron"], "yes");
    assert_eq!(v["perron"], "yes");
}

#[test]
fn realize_outputs_the_spec_constructions() {
    let out = ddeg(&["--format", "records", "realize", "x^2-3*x+1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(
        v["realization"]["automorphism"],
        "(x1*x2 + x3, x1*x2^2 + x4, x1, x2)"
    );
    let out2 = ddeg(&["--format", "records", "realize", "x^2-x-3"]);
    let v2: serde_json::Value =
        serde_json::from_str(stdout(&out2).lines().next().unwrap()).unwrap();
    assert_eq!(v2["realization"]["automorphism"], "(x1*x2^3 + x3, x1, x2)");
    let out3 = ddeg(&["--format", "records", "realize", "x-5"]);
    let v3: serde_json::Value =
        serde_json::from_str(stdout(&out3).lines().next().unwrap()).unwrap();
    assert_eq!(v3["realization"]["automorphism"], "(x1^5 + x2, x1)");
}

#[test]
fn oracle_identity_and_periodic() {
    let out = ddeg(&["--format", "records", "oracle", "(x1, x2, x3)"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["degree"], "1");
    }
    // period-3 example: degrees cycle 2, 4, 1
    let out2 = ddeg(&["--format", "records", "oracle", "(x3 - x2^2, x1, x2 + x1^2)"]);
    let v2: serde_json::Value =
        serde_json::from_str(stdout(&out2).lines().next().unwrap()).unwrap();
    let degs: Vec<&str> = v2["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["degree"].as_str().unwrap())
        .collect();
    assert_eq!(&degs[..6], &["2", "4", "1", "2", "4", "1"]);
}

#[test]
fn input_from_file_works() {
    let dir = std::env::temp_dir().join("ddeg-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("map.txt");
    std::fs::write(&path, "(x2 + x1^2, x1)\n").unwrap();
    let out = ddeg(&["compute", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2.0000"));
}

#[test]
fn env_variables_mirror_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_ddeg"))
        .env("DDEG_DIGITS", "8")
        .args(["compute", "(x1^2 + x2, x1)"])
        .output()
        .unwrap();
    assert!(stdout(&out).contains("lambda:      2.00000000 (exact, proven)"));
}

#[test]
fn realize_with_matrix_witness() {
    // plastic number with an explicit companion-matrix witness
    let out = ddeg(&[
        "--format",
        "records",
        "realize",
        "x^3-x-1",
        "--matrix",
        "[[0,1,0],[0,0,1],[1,1,0]]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(v["realization"]["dimension"], 6);
    assert_eq!(v["realization"]["tag"], "A2n-doubling");
}
