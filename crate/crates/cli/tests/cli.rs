//! End-to-end checks of the command-line contract: exit codes, output
//! framing, and run-to-run determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_analogia"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn success_paths_exit_zero() {
    let metric = fixture("metric_audit.json");
    let currencies = fixture("currencies.json");
    let cities = fixture("berlin_rome.json");
    let talaly = fixture("talaly.json");
    let mengoli = fixture("mengoli.json");
    let invocations: [Vec<&str>; 9] = [
        vec!["euler"],
        vec!["grandi"],
        vec!["sim", "--kb", &metric, "--a", "i1", "--b", "i3"],
        vec!["audit", "--kb", &metric],
        vec!["rank", "--kb", &metric, "--target", "i1", "--j", "1"],
        vec!["determine", "--kb", &currencies],
        vec!["typicality", "--kb", &cities, "--concept", "european_city"],
        vec!["multi", "--problem", &talaly],
        vec!["multi", "--problem", &mengoli],
    ];
    for args in invocations {
        let output = run(&args);
        assert_eq!(
            output.status.code(),
            Some(0),
            "args {args:?}: stderr {}",
            stderr_of(&output)
        );
    }
}

#[test]
fn unreadable_input_exits_one_and_names_the_path() {
    let output = run(&["audit", "--kb", "no_such_file.json"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = stderr_of(&output);
    assert!(stderr.contains("no_such_file.json"), "stderr: {stderr}");
}

#[test]
fn malformed_json_exits_one() {
    let dir = std::env::temp_dir().join("analogia-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let output = run(&["audit", "--kb", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_sixty_four() {
    let unknown_flag = run(&["euler", "--no-such-flag"]);
    assert_eq!(unknown_flag.status.code(), Some(64));
    let unknown_command = run(&["frobnicate"]);
    assert_eq!(unknown_command.status.code(), Some(64));
    let missing_required = run(&["sim", "--kb", &fixture("metric_audit.json")]);
    assert_eq!(missing_required.status.code(), Some(64));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["euler", "--help"]).status.code(), Some(0));
}

#[test]
fn failed_numeric_checks_exit_two() {
    let output = run(&["euler", "--K", "1", "--tolerance", "1e-9"]);
    assert_eq!(output.status.code(), Some(2), "stderr: {}", stderr_of(&output));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("FAIL"), "stdout: {stdout}");
}

#[test]
fn rule_modality_violations_exit_one() {
    let output = run(&[
        "infer",
        "--kb",
        &fixture("currencies.json"),
        "--rule",
        "det1",
        "--source",
        "t3",
        "--target",
        "visitor",
        "--connection",
        "[language -> currency]",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("total connection"));
}

#[test]
fn unknown_concepts_exit_one() {
    let output = run(&[
        "typicality",
        "--kb",
        &fixture("berlin_rome.json"),
        "--concept",
        "missing",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr_of(&output).contains("missing"));
}

#[test]
fn structured_output_is_a_report_envelope() {
    let metric = fixture("metric_audit.json");
    let currencies = fixture("currencies.json");
    let talaly = fixture("talaly.json");
    let invocations: [Vec<&str>; 5] = [
        vec!["euler", "--format", "structured"],
        vec!["grandi", "--format", "structured"],
        vec!["audit", "--kb", &metric, "--format", "structured"],
        vec!["determine", "--kb", &currencies, "--format", "structured"],
        vec!["multi", "--problem", &talaly, "--format", "structured"],
    ];
    for args in invocations {
        let output = run(&args);
        let doc: Value = serde_json::from_slice(&output.stdout)
            .unwrap_or_else(|e| panic!("args {args:?}: invalid JSON: {e}"));
        let reports = doc["reports"].as_array().expect("top-level reports array");
        assert!(!reports.is_empty(), "args {args:?}: empty reports");
        for report in reports {
            assert!(report["kind"].is_string(), "every report is tagged with a kind");
        }
    }
}

#[test]
fn structured_output_round_trips_through_serde() {
    let output = run(&["multi", "--problem", &fixture("talaly.json"), "--format", "structured"]);
    let doc: Value = serde_json::from_slice(&output.stdout).unwrap();
    let rendered = serde_json::to_string_pretty(&doc).unwrap();
    let reparsed: Value = serde_json::from_str(&rendered).unwrap();
    assert_eq!(doc, reparsed);
}

#[test]
fn identical_runs_are_byte_identical() {
    let metric = fixture("metric_audit.json");
    let talaly = fixture("talaly.json");
    let invocations: [Vec<&str>; 4] = [
        vec!["euler", "--format", "structured"],
        vec!["multi", "--problem", &talaly, "--format", "structured"],
        vec!["audit", "--kb", &metric, "--format", "structured"],
        vec!["rank", "--kb", &metric, "--target", "i1", "--j", "1"],
    ];
    for args in invocations {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "args {args:?} differ across runs");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn grandi_names_both_stabilized_values() {
    let stdout = stdout_of(&run(&["grandi"]));
    assert!(stdout.contains("stabilized at 0"), "stdout: {stdout}");
    assert!(stdout.contains("stabilized at 1"), "stdout: {stdout}");
    assert!(stdout.contains("regrouped=1 plain=1"), "stdout: {stdout}");
}

#[test]
fn infer_typ_projects_the_relevant_aspect() {
    let output = run(&[
        "infer",
        "--kb",
        &fixture("berlin_rome.json"),
        "--rule",
        "typ",
        "--source",
        "berlin",
        "--target",
        "rome",
        "--concept",
        "european_city",
        "--aspect",
        "public_transport",
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr_of(&output));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("underground"), "stdout: {stdout}");
    assert!(stdout.contains("plausible"), "stdout: {stdout}");
}

#[test]
fn table_and_structured_formats_report_the_same_verdicts() {
    let table = stdout_of(&run(&["determine", "--kb", &fixture("currencies.json")]));
    assert!(table.contains("[country -> currency]: total"));
    assert!(table.contains("[language -> currency]: incomplete"));

    let output = run(&["determine", "--kb", &fixture("currencies.json"), "--format", "structured"]);
    let doc: Value = serde_json::from_slice(&output.stdout).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["verified"], Value::from("total"));
    assert_eq!(reports[1]["verified"], Value::from("incomplete"));
}
