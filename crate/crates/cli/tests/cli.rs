//! End-to-end checks of the command line through the built binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn mechnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mechnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("mechnet-cli-{}-{name}", std::process::id()));
    path
}

fn write_path_151() -> PathBuf {
    let path = tmp("p151.txt");
    fs::write(&path, "3 2 5\n0 1\n1 5\n2 1\n0 1\n1 2\n").unwrap();
    path
}

#[test]
fn gen_path_produces_a_valid_file() {
    let out = tmp("gen-path.txt");
    let result = mechnet(&[
        "gen",
        "--kind",
        "path",
        "--n",
        "3",
        "--weight-bound",
        "5",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header, vec!["3", "2", "5"]);
}

#[test]
fn gen_is_deterministic_in_the_seed() {
    let a = mechnet(&[
        "gen", "--kind", "gnp", "--n", "10", "--p", "0.3", "--seed", "7",
    ]);
    let b = mechnet(&[
        "gen", "--kind", "gnp", "--n", "10", "--p", "0.3", "--seed", "7",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn run_output_is_byte_identical_across_invocations() {
    let graph = write_path_151();
    let a = mechnet(&[
        "run",
        "--mechanism",
        "mwds",
        "--graph",
        graph.to_str().unwrap(),
    ]);
    let b = mechnet(&[
        "run",
        "--mechanism",
        "mwds",
        "--graph",
        graph.to_str().unwrap(),
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_rejects_odd_regular_graphs() {
    let result = mechnet(&["gen", "--kind", "regular", "--n", "5", "--d", "3"]);
    assert_eq!(result.status.code(), Some(3));
}

#[test]
fn run_emits_the_result_json() {
    let graph = write_path_151();
    let result = mechnet(&[
        "run",
        "--mechanism",
        "mwis",
        "--graph",
        graph.to_str().unwrap(),
    ]);
    assert!(result.status.success());
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("\"allocation\":[0,1,0]"), "{stdout}");
    assert!(
        stdout.contains("\"payments\":[\"0\",\"-2\",\"0\"]"),
        "{stdout}"
    );
}

#[test]
fn run_requires_rates_for_slot() {
    let graph = write_path_151();
    let result = mechnet(&[
        "run",
        "--mechanism",
        "slot",
        "--graph",
        graph.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn run_slot_with_rates_file() {
    let graph = write_path_151();
    let rates = tmp("rates.txt");
    fs::write(&rates, "10\n5/2\n").unwrap();
    let result = mechnet(&[
        "run",
        "--mechanism",
        "slot",
        "--graph",
        graph.to_str().unwrap(),
        "--rates",
        rates.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{:?}", result);
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("\"mechanism\":\"slot\""));
}

#[test]
fn run_reports_congest_accounting() {
    let graph = write_path_151();
    let result = mechnet(&[
        "run",
        "--mechanism",
        "mwvc",
        "--graph",
        graph.to_str().unwrap(),
        "--model",
        "congest",
        "--congest-constant",
        "16",
    ]);
    assert!(result.status.success(), "{:?}", result);
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("max_message_bits"));
}

#[test]
fn run_accepts_bid_overrides_and_epsilon() {
    let graph = write_path_151();
    let result = mechnet(&[
        "run",
        "--mechanism",
        "mwvc",
        "--graph",
        graph.to_str().unwrap(),
        "--bids",
        "5,0,5",
        "--epsilon",
        "1/2",
    ]);
    assert!(result.status.success(), "{:?}", result);
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("\"mechanism\":\"mwvc\""), "{stdout}");
}

#[test]
fn run_rejects_malformed_graphs() {
    let path = tmp("bad.txt");
    fs::write(&path, "2 1 3\n0 1\n1 2\n1 0\n").unwrap();
    let result = mechnet(&[
        "run",
        "--mechanism",
        "mwis",
        "--graph",
        path.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(3));
    let stderr = String::from_utf8(result.stderr).unwrap();
    assert!(stderr.contains("line 4"), "{stderr}");
}

#[test]
fn verify_quick_monotone_passes() {
    let report = tmp("monotone.jsonl");
    let result = mechnet(&[
        "verify",
        "--suite",
        "monotone",
        "--scope",
        "quick",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{:?}", result);
    let lines = fs::read_to_string(&report).unwrap();
    assert!(lines.trim_end().ends_with('}'));
    assert!(lines.contains("\"summary\":true"));
}

#[test]
fn verify_rejects_unknown_suites() {
    let result = mechnet(&["verify", "--suite", "nonsense"]);
    assert_eq!(result.status.code(), Some(2));
}
