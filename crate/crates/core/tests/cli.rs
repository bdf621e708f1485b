//! Black-box tests of the `qloops` binary: rendered text, report determinism,
//! exit codes, and report round-tripping.

use std::process::{Command, Output};

use qloops::report::Report;

fn qloops(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qloops"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn timesym_instance_text_shows_reduced_input() {
    let output = qloops(&[
        "--scenario",
        "timesym-instance",
        "--k",
        "2",
        "--halving",
        "initial=0;final=1",
        "--final-value",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let text = stdout(&output);
    assert!(text.contains("(|01⟩_B + |11⟩_B)|00⟩_A"), "missing reduced input in:\n{text}");
    assert!(text.contains("|01⟩_B|01⟩_A + |11⟩_B|11⟩_A"), "missing forward output in:\n{text}");
    assert!(text.contains("⇐ U† ⇐"), "missing backward arrow in:\n{text}");
}

#[test]
fn same_seed_gives_byte_identical_reports() {
    let args = [
        "--scenario", "bell", "--seed", "42", "--trials", "500", "--format", "report",
    ];
    let first = qloops(&args);
    let second = qloops(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout, "report bytes differ for identical seeds");
    assert!(!first.stdout.is_empty());
}

#[test]
fn report_round_trips_through_the_parser() {
    let output = qloops(&[
        "--scenario", "grover-ordinary", "--k", "2", "--ball", "01", "--format", "report",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = Report::from_json(&stdout(&output)).expect("report parses");
    assert_eq!(report.version, 1);
    assert_eq!(report.scenario, "grover-ordinary");
    assert!(report.all_checks_passed());
    for entry in &report.states {
        entry.to_state().expect("state entries reconstruct");
    }
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = std::env::temp_dir().join("qloops-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let output = qloops(&[
        "--scenario",
        "timescale",
        "--tq-years",
        "1e10",
        "--rate",
        "1",
        "--format",
        "report",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    Report::from_json(&written).expect("written report parses");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn usage_errors_exit_with_code_1() {
    assert_eq!(qloops(&[]).status.code(), Some(1));
    assert_eq!(qloops(&["--scenario", "no-such-scenario"]).status.code(), Some(1));
    // A scenario missing its required inputs is also a usage error.
    assert_eq!(qloops(&["--scenario", "grover-ordinary", "--k", "2"]).status.code(), Some(1));
    assert_eq!(
        qloops(&["--scenario", "bell", "--format", "yaml"]).status.code(),
        Some(1)
    );
}

#[test]
fn domain_errors_exit_with_code_2() {
    // An empty life-compatible set makes the toy universe unsatisfiable.
    let output = qloops(&[
        "--scenario",
        "anthropic",
        "--k",
        "2",
        "--life-set",
        "",
        "--halving",
        "initial=0;final=1",
    ]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
}

#[test]
fn help_exits_successfully() {
    let output = qloops(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
}
