//! End-to-end checks of the `sumprod` binary: exit codes, formats, file
//! round trips, and the budget cap.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sumprod")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn sumprod")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn gen_stats_pipeline() {
    let set_path = tmp("cli-ap.set");
    let out = run(&[
        "gen",
        "ap:1,1,4",
        "--out",
        set_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let contents = std::fs::read_to_string(&set_path).unwrap();
    assert_eq!(contents, "1 0\n2 0\n3 0\n4 0\n");

    let out = run(&["stats", set_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["sizes"]["sum"], 7);
    assert_eq!(v["sizes"]["ratio"], 11);

    let out = run(&["stats", set_path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("set_id,n,"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn usage_errors_exit_2() {
    // unknown suite
    let out = run(&["verify", "--suite", "nope", "--count", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed generator spec
    let out = run(&["gen", "ap:1"]);
    assert_eq!(out.status.code(), Some(2));
    // missing file
    let out = run(&["stats", "/definitely/not/here.set"]);
    assert_eq!(out.status.code(), Some(2));
    // set with zero element fails multiplicative stats
    let zero_path = tmp("cli-zero.set");
    std::fs::write(&zero_path, "0 0\n1 0\n").unwrap();
    let out = run(&["stats", zero_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_small_suite_passes() {
    let out = run(&[
        "verify",
        "--suite",
        "identities",
        "--family",
        "mixed:6",
        "--count",
        "4",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("result PASS"), "{text}");

    // popular-vertex variant of the construction
    let out = run(&[
        "verify", "--suite", "claim", "--family", "sector:8", "--count", "2", "--popular",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn sweep_formats() {
    let out = run(&["sweep", "--family", "ap:4", "--sizes", "4,8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().contains(",7,"));

    // empty size list gives a header-only table
    let out = run(&["sweep", "--family", "ap:4", "--sizes", "", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("set_id,"));
}

#[test]
fn budget_cap_applies() {
    let out = Command::new(bin())
        .args(["sweep", "--family", "ap:4", "--sizes", "64"])
        .env("SUMPROD_BUDGET_MS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("budget"), "{err}");

    let out = Command::new(bin())
        .args(["sweep", "--family", "ap:4", "--sizes", "4"])
        .env("SUMPROD_BUDGET_MS", "notanumber")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
