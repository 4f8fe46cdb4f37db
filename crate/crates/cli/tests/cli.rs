//! End-to-end behavior of the `delsarte` binary: exit codes, file
//! formats, and output determinism.

use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delsarte")).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

#[test]
fn bound_reports_sqrt_five_for_the_pentagon_instance() {
    let out = run(&["bound", "--group", "5", "--forbidden", "1,4"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let bound = json["bound"].as_f64().unwrap();
    assert!((bound - 5.0f64.sqrt()).abs() < 1e-6);
    assert!(json["tolerances"]["general"].as_f64().unwrap() > 0.0);
}

#[test]
fn asymmetric_forbidden_set_fails_verification() {
    let out = run(&["bound", "--group", "5", "--forbidden", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("negation"));
}

#[test]
fn usage_errors_exit_64() {
    let out = run(&["bound", "--group", "5"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["bound", "--group", "banana", "--forbidden", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn help_is_not_a_usage_error() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, "{\"cyclic_orders\": [6,]}").unwrap();
    let out = run(&["bound", "--group-file", path.to_str().unwrap(), "--forbidden", "3"]);
    assert_eq!(out.status.code(), Some(64));
    let err = stderr(&out);
    assert!(err.contains("line") && err.contains("column"), "stderr: {err}");
}

#[test]
fn group_and_forbidden_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("g.json");
    let forbidden = dir.path().join("a.json");
    std::fs::write(&group, r#"{"cyclic_orders": [6]}"#).unwrap();
    std::fs::write(&forbidden, r#"{"members": [[1], [5]]}"#).unwrap();
    let out = run(&[
        "bound",
        "--group-file",
        group.to_str().unwrap(),
        "--forbidden-file",
        forbidden.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
}

#[test]
fn verify_witness_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("h.json");
    // constant one is a witness when everything is forbidden
    std::fs::write(&witness, r#"{"re": [1.0, 1.0], "im": [0.0, 0.0]}"#).unwrap();
    let out = run(&[
        "verify-witness",
        "--group",
        "2",
        "--forbidden",
        "1",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["valid"], true);
    assert!((json["bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    // same function fails when only 0 is forbidden
    let out = run(&[
        "verify-witness",
        "--group",
        "2",
        "--forbidden",
        "",
        "--witness",
        witness.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["valid"], false);
}

#[test]
fn improve_synthesizes_and_beats_the_classical_bound() {
    let out = run(&["improve", "--group", "6", "--forbidden", "3", "--prescribed", "0,1"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let classical = json["classical_bound"].as_f64().unwrap();
    let improved = json["improved_bound"].as_f64().unwrap();
    assert!((classical - 3.0).abs() < 1e-8);
    assert!(improved < classical - 0.5);
    assert!(json["improvement_applied"].as_bool().unwrap());
}

#[test]
fn improve_without_inputs_is_a_usage_error() {
    let out = run(&["improve", "--group", "6", "--forbidden", "3"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn corollary_excludes_with_a_file_witness() {
    // Z6, A = {0,1,5}, pinned {0,3}: D is empty, so an admissible K with
    // pinned sum 1 certifies exclusion. K was synthesized against the
    // witness h below (null set exactly {3}) and scaled to sum 1; the h
    // must travel with it, since the LP may pick an optimal witness with
    // a different null set.
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    std::fs::write(&h, r#"{"re": [1.0, 0.5, 0.0, 0.0, 0.0, 0.5], "im": [0, 0, 0, 0, 0, 0]}"#)
        .unwrap();
    let k = dir.path().join("k.json");
    std::fs::write(
        &k,
        r#"{"re": [0.5, -0.25, -0.25, 0.5, -0.25, -0.25], "im": [0, 0, 0, 0, 0, 0]}"#,
    )
    .unwrap();
    let out = run(&[
        "corollary",
        "--group",
        "6",
        "--forbidden",
        "1,5",
        "--pinned",
        "0;3",
        "--witness",
        h.to_str().unwrap(),
        "--second-witness",
        k.to_str().unwrap(),
        "--m",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["excluded"], true);
    assert!(json["d_members"].as_array().unwrap().is_empty());
}

#[test]
fn corollary_inconclusive_exits_two() {
    // zero K fails the pinned-sum condition
    let dir = tempfile::tempdir().unwrap();
    let k = dir.path().join("k.json");
    std::fs::write(&k, r#"{"re": [0, 0, 0, 0, 0, 0], "im": [0, 0, 0, 0, 0, 0]}"#).unwrap();
    let out = run(&[
        "corollary",
        "--group",
        "6",
        "--forbidden",
        "3",
        "--pinned",
        "0",
        "--second-witness",
        k.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
}

#[test]
fn oracle_maxb_finds_the_lexicographically_least_example() {
    let out = run(&["oracle", "max-b", "--group", "6", "--forbidden", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["max_cardinality"], 3);
    assert_eq!(json["example"], serde_json::json!([[0], [1], [2]]));
}

#[test]
fn oracle_maxb_guards_large_groups() {
    let out = run(&["oracle", "max-b", "--group", "30", "--forbidden", "15"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn certify_fab_verdict_true_and_writes_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("fab.json");
    let out = run(&[
        "mub",
        "certify-fab",
        "--a-phase",
        "0.5",
        "--b-phase",
        "1.25",
        "--samples",
        "2",
        "--matrix-out",
        matrix.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["verdict"], true);

    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&matrix).unwrap()).unwrap();
    assert_eq!(m["n"], 6);
    assert_eq!(m["re"].as_array().unwrap().len(), 6);
    // first column is all ones
    for row in 0..6 {
        assert!((m["re"][row][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(m["im"][row][0].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "mub",
        "certify-fab",
        "--a-phase",
        "2.2",
        "--b-phase",
        "0.31",
        "--samples",
        "3",
        "--seed",
        "11",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sweep_emits_the_fixed_csv_schema_deterministically() {
    let args = ["mub", "sweep", "--grid", "3", "--samples", "1", "--seed", "5"];
    let serial = run(&args);
    assert_eq!(serial.status.code(), Some(0), "stderr: {}", stderr(&serial));
    let text = stdout(&serial);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "a_phase,b_phase,verdict,margin,n_samples,worst_sample_K");
    assert_eq!(lines.count(), 9);

    // parallel run writes rows in the same deterministic order
    let parallel =
        run(&["mub", "sweep", "--grid", "3", "--samples", "1", "--seed", "5", "--jobs", "4"]);
    assert_eq!(stdout(&parallel), text);
}

#[test]
fn full_grid_sweep_has_all_verdicts_true() {
    let out = run(&["mub", "sweep", "--grid", "24", "--samples", "1", "--jobs", "4"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 576);
    for row in rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[2], "true", "row: {row}");
    }
}

#[test]
fn sweep_json_format_is_available() {
    let out = run(&["mub", "sweep", "--grid", "2", "--samples", "0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
}

#[test]
fn csv_format_is_rejected_outside_sweep() {
    let out = run(&["bound", "--group", "5", "--forbidden", "1,4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out =
        run(&["bound", "--group", "5", "--forbidden", "1,4", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((json["bound"].as_f64().unwrap() - 5.0f64.sqrt()).abs() < 1e-6);
}

#[test]
fn optimize_c_matches_the_closed_form() {
    let out = run(&["mub", "optimize-c"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let agreement = json["agreement"].as_f64().unwrap();
    assert!(agreement < 1e-6);
    assert!(json["c_numeric"].as_f64().unwrap() > 0.843);
    assert_eq!(json["active_case"], "one-active-g1");
}

#[test]
fn text_format_renders_the_certificate_argument() {
    let out = run(&[
        "mub",
        "certify-fab",
        "--a-phase",
        "0",
        "--b-phase",
        "0",
        "--samples",
        "1",
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: TRUE"));
    assert!(text.contains("closed form"));
    assert!(text.contains("-17/486"));
}

#[test]
fn path_is_reported_when_input_file_is_missing() {
    let out = run(&["bound", "--group-file", "/nonexistent/g.json", "--forbidden", "1"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("/nonexistent/g.json"));
}

#[allow(dead_code)]
fn touch(_: &Path) {}
