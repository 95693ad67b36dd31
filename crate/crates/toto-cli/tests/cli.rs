//! End-to-end checks of the `toto` binary: output contracts, exit codes,
//! and the stability guarantees of the serialized formats.

use std::process::{Command, Output};

use serde_json::Value;
use toto_cli::json::to_canonical;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toto"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_toto"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn code_of(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn solve_human_output_lists_the_optimum() {
    let output = run(&["solve", "--gamma", "8", "--u1", "0.0002", "--u2", "1"]);
    assert_eq!(code_of(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("* T3+"), "{text}");
    assert!(text.contains("optimal: T3+ with 3 switchings"), "{text}");
    assert!(text.contains("7.3864"), "{text}");
}

#[test]
fn solve_json_is_byte_stable_and_marks_one_optimum() {
    let output = run(&[
        "solve",
        "--gamma",
        "1.7320508",
        "--u1",
        "0.0002",
        "--u2",
        "6.5",
        "--json",
    ]);
    assert_eq!(code_of(&output), 0);
    let text = stdout_of(&output);
    let parsed: Value = serde_json::from_str(&text).expect("valid JSON");
    assert_eq!(format!("{}\n", to_canonical(&parsed)), text);

    assert_eq!(parsed["optimal"], "T2-");
    let candidates = parsed["candidates"].as_array().unwrap();
    let optimal_count = candidates
        .iter()
        .filter(|c| c["optimal"] == Value::Bool(true))
        .count();
    assert_eq!(optimal_count, 1);
    let best = &candidates[0];
    assert!((best["total_time"].as_f64().unwrap() - 1.3888).abs() < 1e-3);
    assert!(candidates
        .iter()
        .all(|c| c["validation"]["pass"] == Value::Bool(true)));
}

#[test]
fn invalid_bounds_exit_with_2() {
    let output = run(&["solve", "--gamma", "0.5", "--u1", "0.1", "--u2", "2"]);
    assert_eq!(code_of(&output), 2);
}

#[test]
fn missing_problem_parameters_exit_with_2() {
    let output = run(&["solve"]);
    assert_eq!(code_of(&output), 2);
}

#[test]
fn seconds_without_frequency_input_exits_with_2() {
    let output = run(&[
        "solve",
        "--gamma",
        "1.7320508",
        "--u1",
        "0.0002",
        "--u2",
        "1",
        "--seconds",
    ]);
    assert_eq!(code_of(&output), 2);
}

#[test]
fn seconds_rescale_times_with_frequency_input() {
    let output = run(&[
        "solve",
        "--omega0",
        "3",
        "--omegaf",
        "1",
        "--omega1",
        "0.04242640687",
        "--omega2",
        "3",
        "--seconds",
        "--json",
    ]);
    assert_eq!(code_of(&output), 0);
    let parsed: Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    assert_eq!(parsed["time_unit"], "seconds");
    assert_eq!(parsed["optimal"], "T1+");
    let total = parsed["candidates"][0]["total_time"].as_f64().unwrap();
    assert!((total - 1.678466 / 3.0).abs() < 1e-3, "total = {total}");
}

#[test]
fn thread_cap_does_not_change_the_report() {
    let args = [
        "solve",
        "--gamma",
        "1.7320508",
        "--u1",
        "0.0002",
        "--u2",
        "1",
        "--json",
    ];
    let unconstrained = run(&args);
    let capped = run_with_env(&args, "TOTO_THREADS", "1");
    let auto = run_with_env(&args, "TOTO_THREADS", "0");
    assert_eq!(code_of(&capped), 0);
    assert_eq!(stdout_of(&unconstrained), stdout_of(&capped));
    assert_eq!(stdout_of(&unconstrained), stdout_of(&auto));
}

#[test]
fn malformed_thread_cap_exits_with_2() {
    let output = run_with_env(&["table"], "TOTO_THREADS", "many");
    assert_eq!(code_of(&output), 2);
}

#[test]
fn table_prints_the_computed_grid() {
    let output = run(&["table"]);
    assert_eq!(code_of(&output), 0);
    let text = stdout_of(&output);
    assert!(text.contains("7.0651"), "{text}");
    let t5_plus: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("T5+"))
        .expect("T5+ row")
        .split_whitespace()
        .collect();
    assert_eq!(t5_plus[1], "-");
    assert_eq!(t5_plus[2], "-");
    assert_eq!(t5_plus.last().unwrap(), &"-");
    let t5_minus: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("T5-"))
        .expect("T5- row")
        .split_whitespace()
        .collect();
    assert_eq!(t5_minus.last().unwrap(), &"-");
}

#[test]
fn table_regression_reports_max_deviation() {
    let loose = run(&["table", "--tolerance", "1e-1"]);
    assert_eq!(code_of(&loose), 0);
    assert!(stdout_of(&loose).contains("max deviation vs published values"));

    let tight = run(&["table", "--tolerance", "1e-3"]);
    assert_eq!(code_of(&tight), 3);
}

#[test]
fn simulate_csv_honors_the_format_contract() {
    let output = run(&[
        "simulate",
        "--gamma",
        "8",
        "--u1",
        "0.0002",
        "--u2",
        "4",
        "--samples-per-segment",
        "40",
    ]);
    assert_eq!(code_of(&output), 0);
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,u,z1,z2,z3"));

    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5 * 41);

    let first = &rows[0];
    assert_eq!(first[0], 0.0);
    assert_eq!(first[1], 1.0);
    assert_eq!(first[2], 0.0);
    assert_eq!(&first[4..], &[1.0, 1.0, 0.0]);

    let last = rows.last().unwrap();
    assert!((last[1] - 8.0).abs() < 1e-6);
    assert!(last[2].abs() < 1e-6);

    // The identity z1 z2 - z3^2/4 = 1 holds to the precision the ten
    // significant digits of the file can carry.
    for row in &rows {
        assert!((row[4] * row[5] - row[6] * row[6] / 4.0 - 1.0).abs() < 1e-6);
    }

    let mut boundary_controls = Vec::new();
    for pair in rows.windows(2) {
        assert!(pair[1][0] >= pair[0][0], "time steps backwards");
        if pair[0][..3] == pair[1][..3] && pair[0][3] != pair[1][3] {
            boundary_controls.push((pair[0][3], pair[1][3]));
        }
    }
    assert_eq!(boundary_controls.len(), 4);
    for (before, after) in boundary_controls {
        assert!((before == 0.0002 && after == 4.0) || (before == 4.0 && after == 0.0002));
    }
}

#[test]
fn simulate_writes_files_and_reports_io_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trajectory.csv");
    let output = run(&[
        "simulate",
        "--gamma",
        "1.7320508",
        "--u1",
        "0.0002",
        "--u2",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&output), 0);
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("t,x1,x2,u,z1,z2,z3\n"));

    let broken = run(&[
        "simulate",
        "--gamma",
        "1.7320508",
        "--u1",
        "0.0002",
        "--u2",
        "1",
        "--out",
        "/nonexistent-dir/trajectory.csv",
    ]);
    assert_eq!(code_of(&broken), 4);
}

#[test]
fn sweep_emits_row_major_grid_with_status() {
    let output = run(&[
        "sweep",
        "--gamma-range",
        "1.7320508:8:2",
        "--u2-range",
        "0.5:6.5:2",
        "--u1",
        "0.0002",
    ]);
    assert_eq!(code_of(&output), 0);
    let text = stdout_of(&output);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "gamma,u2,status,optimal_family,n,branch,switch_count,total_time"
    );
    assert_eq!(lines.len(), 5);

    let fields: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
    let gammas: Vec<f64> = fields.iter().map(|f| f[0].parse().unwrap()).collect();
    let u2s: Vec<f64> = fields.iter().map(|f| f[1].parse().unwrap()).collect();
    assert_eq!(u2s, vec![0.5, 6.5, 0.5, 6.5]);
    assert!((gammas[0] - 1.7320508).abs() < 1e-12 && (gammas[2] - 8.0).abs() < 1e-12);

    assert_eq!(fields[0][2], "invalid");
    assert_eq!(fields[2][2], "invalid");
    assert!(fields[0][3..].iter().all(|f| f.is_empty()));

    assert_eq!(fields[1][2], "ok");
    assert_eq!(fields[1][6], "2");
    let time: f64 = fields[1][7].parse().unwrap();
    assert!((time - 1.3888).abs() < 1e-3);
    assert_eq!(fields[3][2], "ok");
}

#[test]
fn oracle_flag_confirms_the_simple_case() {
    let output = run(&[
        "solve",
        "--gamma",
        "1.7320508",
        "--u1",
        "0.0002",
        "--u2",
        "1",
        "--json",
        "--oracle",
    ]);
    assert_eq!(code_of(&output), 0);
    let parsed: Value = serde_json::from_str(&stdout_of(&output)).unwrap();
    let oracle = &parsed["oracle"];
    assert_eq!(oracle["confirmed"], Value::Bool(true));
    assert_eq!(oracle["durations_match"], Value::Bool(true));
    assert_eq!(oracle["runs"].as_array().unwrap().len(), 18);
    assert!(oracle["margin"].as_f64().unwrap() > -1e-4);
}
