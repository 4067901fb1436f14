use std::path::PathBuf;
use std::process::{Command, Output};

use arcplex::{BallExport, ComplexExport};

fn arcplex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcplex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn small_cases_pass() {
    for case in ["1,1", "1,2", "2,1"] {
        let o = arcplex(&["verify", "small-case", "--case", case]);
        assert_eq!(o.status.code(), Some(0), "{case}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn small_case_json_report() {
    let o = arcplex(&["--json", "verify", "small-case", "--case", "1,2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["pass"] == true));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "small-case", "--case", "x"][..],
        &["verify", "small-case", "--case", "3,3"],
        &["verify", "small-case"],
        &["verify", "suite", "--genus", "1"],
        &["verify", "suite", "--genus", "1", "--boundary", "1"],
        &["no-such-command"],
    ] {
        assert_eq!(arcplex(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn suite_runs_from_a_config_file() {
    let cfg = scratch("suite.json");
    std::fs::write(
        &cfg,
        r#"{"genus": 1, "boundary": 2, "radius": 3, "samples": 50, "seed": 7, "pairs": 10}"#,
    )
    .unwrap();
    let o = arcplex(&["--config", cfg.to_str().unwrap(), "verify", "suite"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn bad_config_is_reported() {
    let missing = scratch("missing.json");
    let o = arcplex(&[
        "--config",
        missing.to_str().unwrap(),
        "verify",
        "small-case",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let unknown = scratch("unknown.json");
    std::fs::write(&unknown, r#"{"colour": "blue"}"#).unwrap();
    let o = arcplex(&[
        "--config",
        unknown.to_str().unwrap(),
        "verify",
        "small-case",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ball_export_round_trips() {
    let out = scratch("ball.json");
    let o = arcplex(&[
        "export",
        "--what",
        "ball",
        "--format",
        "json",
        "--genus",
        "1",
        "--boundary",
        "2",
        "--radius",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let ball = BallExport::from_json(&text).unwrap();
    assert!(ball.complete);
    assert_eq!(ball.arcs.len(), 8);
    assert_eq!(ball.to_json().unwrap(), text);
}

#[test]
fn complex_dot_export() {
    let out = scratch("complex.dot");
    let o = arcplex(&[
        "export",
        "--what",
        "complex",
        "--format",
        "dot",
        "--genus",
        "1",
        "--boundary",
        "2",
        "--radius",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let dot = std::fs::read_to_string(&out).unwrap();
    assert!(dot.starts_with("graph complex {"));
    assert_eq!(dot.lines().filter(|l| l.contains("deg ")).count(), 8);

    let json = scratch("complex.json");
    let o = arcplex(&[
        "export",
        "--what",
        "complex",
        "--format",
        "json",
        "--genus",
        "1",
        "--boundary",
        "2",
        "--radius",
        "8",
        "--out",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let w = ComplexExport::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(w.to_window().unwrap().num_vertices(), 8);
}

#[test]
fn export_to_unwritable_path_exits_one() {
    let o = arcplex(&[
        "export",
        "--what",
        "ball",
        "--format",
        "dot",
        "--genus",
        "1",
        "--boundary",
        "2",
        "--out",
        "/nonexistent-dir/ball.dot",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent-dir/ball.dot"));
}

#[test]
fn find_config_reports_witness_or_absence() {
    let pattern = scratch("crossing.json");
    std::fs::write(
        &pattern,
        r#"{"labels": ["a", "b"], "intersections": [{"pair": ["a", "b"], "value": 1}]}"#,
    )
    .unwrap();
    let p = pattern.to_str().unwrap();
    let o = arcplex(&[
        "find-config",
        "--pattern",
        p,
        "--genus",
        "2",
        "--boundary",
        "2",
        "--radius",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let w: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_ne!(w["arcs"]["a"], w["arcs"]["b"]);

    // a single triangulation has no crossing arcs
    let o = arcplex(&[
        "find-config",
        "--pattern",
        p,
        "--genus",
        "2",
        "--boundary",
        "2",
        "--radius",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not found"));

    let bad = scratch("inconsistent.json");
    std::fs::write(&bad, r#"{"labels": ["a", "a"]}"#).unwrap();
    let o = arcplex(&[
        "find-config",
        "--pattern",
        bad.to_str().unwrap(),
        "--genus",
        "2",
        "--boundary",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
