//! The command-line front end: exit codes, report formats, orbit output.

use std::process::{Command, Output};

fn covq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covq")).args(args).output().expect("binary runs")
}

fn model(name: &str) -> String {
    format!("{}/models/{name}.model", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn passing_suite_exits_zero() {
    let out = covq(&["verify", "--model", &model("flat_galilei"), "--suite", "galilei-core", "--points", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("9 of 9 checks passed"), "{text}");
}

#[test]
fn failing_check_exits_one_and_is_flagged() {
    let out = covq(&[
        "verify",
        "--model",
        &model("flat_galilei"),
        "--suite",
        "galilei-core",
        "--points",
        "20",
        "--tol",
        "cosymplectic-volume=1e9",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().find(|l| l.contains("cosymplectic-volume")).unwrap();
    assert!(row.starts_with("FAIL"), "{row}");
}

#[test]
fn framework_mismatch_exits_two() {
    let out = covq(&["verify", "--model", &model("minkowski"), "--suite", "galilei-core"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("einstein"));
}

#[test]
fn usage_errors_exit_two() {
    let unknown = covq(&["verify", "--model", &model("flat_galilei"), "--suite", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    let missing = covq(&["verify", "--model", "/no/such.model", "--suite", "galilei-core"]);
    assert_eq!(missing.status.code(), Some(2));
    let bad_tol =
        covq(&["verify", "--model", &model("flat_galilei"), "--suite", "galilei-core", "--tol", "omega-closed"]);
    assert_eq!(bad_tol.status.code(), Some(2));
    let bad_flag = covq(&["verify", "--model", &model("flat_galilei")]);
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_identical() {
    let args = [
        "verify",
        "--model",
        &model("minkowski_uniformF"),
        "--suite",
        "einstein-identities",
        "--points",
        "30",
        "--seed",
        "7",
        "--report",
        "json",
    ];
    let (a, b) = (covq(&args), covq(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["suite"], "einstein-identities");
    assert_eq!(v["seed"], 7);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn different_seeds_sample_differently() {
    let run = |seed: &str| {
        covq(&[
            "verify",
            "--model",
            &model("curved_galilei"),
            "--suite",
            "galilei-brackets",
            "--points",
            "10",
            "--seed",
            seed,
            "--report",
            "json",
        ])
        .stdout
    };
    assert_ne!(run("1"), run("2"));
}

#[test]
fn orbit_prints_samples() {
    let out = covq(&[
        "orbit",
        "--model",
        &model("uniform_b_galilei"),
        "--framework",
        "g",
        "--x0",
        "0,0,0,0",
        "--v",
        "0.5,0,0",
        "--duration",
        "1",
        "--samples",
        "3",
        "--report",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["steps"], 1000);
    assert_eq!(v["samples"].as_array().unwrap().len(), 3);
}

#[test]
fn orbit_leaving_the_box_exits_one() {
    let out = covq(&[
        "orbit",
        "--model",
        &model("minkowski_uniformF"),
        "--framework",
        "e",
        "--x0",
        "0,0,0,0",
        "--v",
        "0,0,0",
        "--duration",
        "40",
        "--step",
        "0.01",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("box"));
}

#[test]
fn orbit_spacelike_start_exits_two() {
    let out = covq(&[
        "orbit",
        "--model",
        &model("minkowski"),
        "--framework",
        "e",
        "--x0",
        "0,0,0,0",
        "--v",
        "1.5,0,0",
        "--duration",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_framework_must_match_model() {
    let out = covq(&[
        "orbit",
        "--model",
        &model("minkowski"),
        "--framework",
        "g",
        "--x0",
        "0,0,0,0",
        "--v",
        "0,0,0",
        "--duration",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn orbit_accepts_negative_coordinates_and_rejects_bad_lists() {
    let ok = covq(&[
        "orbit",
        "--model",
        &model("flat_galilei"),
        "--framework",
        "g",
        "--x0",
        "-0.5,-1,0,0",
        "--v",
        "-0.2,0.1,0",
        "--duration",
        "0.5",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let short = covq(&[
        "orbit",
        "--model",
        &model("flat_galilei"),
        "--framework",
        "g",
        "--x0",
        "0,0,0",
        "--v",
        "0,0,0",
        "--duration",
        "1",
    ]);
    assert_eq!(short.status.code(), Some(2));
}
