//! Exit-code and output contract of the `buffsim` binary.

use std::path::PathBuf;
use std::process::Command;

fn fx(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_buffsim")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn holds_is_exit_zero_and_sole_stdout_line() {
    let (code, stdout, _) = run(&[
        "sim",
        "--relation",
        "lookahead",
        "--acceptance",
        "fair",
        &fx("branching.A"),
        &fx("branching.B"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "RESULT holds\n");
}

#[test]
fn fails_is_exit_one() {
    let (code, stdout, _) = run(&[
        "sim",
        "--relation",
        "continuous",
        &fx("inclusion-gap.A"),
        &fx("inclusion-gap.B"),
    ]);
    assert_eq!(code, 1);
    assert_eq!(stdout, "RESULT fails\n");
}

#[test]
fn inclusion_gap_is_included() {
    let (code, stdout, _) = run(&["incl", &fx("inclusion-gap.A"), &fx("inclusion-gap.B")]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "RESULT holds\n");
}

#[test]
fn tiny_cap_is_inconclusive_exit_two() {
    let (code, stdout, _) = run(&[
        "incl",
        "--cap",
        "5",
        &fx("branching.A"),
        &fx("branching.B"),
    ]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "RESULT inconclusive\n");
}

#[test]
fn buffsim_cap_env_sets_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_buffsim"))
        .args(["incl", &fx("branching.A"), &fx("branching.B")])
        .env("BUFFSIM_CAP", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "RESULT inconclusive\n");
}

#[test]
fn usage_errors_exit_two() {
    // --k outside --relation bounded is rejected up front.
    let (code, _, stderr) = run(&[
        "sim",
        "--relation",
        "plain",
        "--k",
        "2",
        &fx("branching.A"),
        &fx("branching.B"),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--k"));

    // Pruning with delayed provenance is refused.
    let (code, _, stderr) = run(&[
        "minimize",
        "--relation",
        "delayed",
        "--k",
        "1",
        "--prune",
        "-o",
        "/tmp/buffsim-unused.nba",
        &fx("branching.A"),
    ]);
    assert_eq!(code, 2);
    assert!(stderr.contains("refused"));

    // Missing file.
    let (code, _, _) = run(&["incl", "no-such-file", &fx("branching.B")]);
    assert_eq!(code, 2);
}

#[test]
fn gen_writes_pair_and_reports_oracle_verdict() {
    let tmp = std::env::temp_dir().join("buffsim-cli-gen");
    std::fs::create_dir_all(&tmp).unwrap();
    let prefix = tmp.join("g").display().to_string();
    let (code, stdout, stderr) = run(&[
        "gen",
        "exptime",
        "--tiling",
        &fx("example.tiles"),
        "--n",
        "1",
        "-o",
        &prefix,
    ]);
    assert_eq!(code, 0, "stderr: {}", stderr);
    assert_eq!(stdout, "RESULT holds\n");
    assert!(tmp.join("g.A.nba").exists());
    assert!(tmp.join("g.B.nba").exists());
}
