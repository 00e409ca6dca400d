//! Behavior tests of the installed binary: output contracts, exit codes,
//! determinism, and the sweep -> extrapolate round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn pairkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pairkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Pull a numeric field out of a flat JSON object.
fn json_number(json: &str, key: &str) -> f64 {
    let tag = format!("\"{key}\":");
    let start = json
        .find(&tag)
        .unwrap_or_else(|| panic!("missing {key} in {json}"))
        + tag.len();
    let rest = &json[start..];
    let end = rest.find([',', '}']).expect("value terminator");
    rest[..end].parse().expect("numeric field")
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("pairkit-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn bcs_bulk_returns_the_reference_constants() {
    let out = pairkit(&["bcs-bulk", "--g", "0.15", "--filling", "1"]);
    assert!(out.status.success());
    let json = stdout_of(&out);
    assert!((json_number(&json, "lambda") - 0.12468144).abs() < 5e-8);
    assert!((json_number(&json, "delta") - 0.015466976).abs() < 5e-9);
    assert!((json_number(&json, "e_per_n") - 0.062022154).abs() < 5e-9);
    assert!((json_number(&json, "e_q") - 0.140151).abs() < 5e-6);
}

#[test]
fn seniority_su4_table_row() {
    let out = pairkit(&[
        "seniority",
        "--model",
        "su4",
        "--big-g",
        "1",
        "--omega",
        "2",
        "--n",
        "4",
        "--lambda2",
        "0",
    ]);
    assert!(out.status.success());
    let json = stdout_of(&out);
    assert_eq!(json_number(&json, "energy"), -8.0);

    // csv form carries the same row
    let out = pairkit(&[
        "seniority",
        "--model",
        "su4",
        "--big-g",
        "1",
        "--omega",
        "2",
        "--n",
        "4",
        "--lambda2",
        "0",
        "--format",
        "csv",
    ]);
    let csv = stdout_of(&out);
    assert!(csv.starts_with("model,omega,n,v,t,lambda2,G,energy"));
    assert!(csv.contains("su4,2,4,0,0,0,1.00000000,-8.00000000"));
}

#[test]
fn ed_task_reports_spectrum_and_labels() {
    let out = pairkit(&[
        "ed",
        "--class",
        "su4-seniority",
        "--omega",
        "2",
        "--n",
        "4",
        "--big-g",
        "1",
        "--k",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = stdout_of(&out);
    assert!(json.contains("\"energies\":[-8.00000000,"));
    assert!(json.contains("\"dim\":70"));
}

#[test]
fn sweep_then_extrapolate_round_trip() {
    let series = temp_path("series.csv");
    let series_str = series.to_str().unwrap();
    let out = pairkit(&[
        "sweep",
        "--class",
        "su4-rg",
        "--g",
        "0.15",
        "--solver",
        "bcs",
        "--variable",
        "omega",
        "--values",
        "160,280,400,520,640,760,880,1000",
        "--out",
        series_str,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = std::fs::read_to_string(&series).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,observable,value");
    assert_eq!(lines.len(), 1 + 8 * 4); // four observables per size

    let out = pairkit(&[
        "extrapolate",
        "--input",
        series_str,
        "--observable",
        "e_per_n",
    ]);
    assert!(out.status.success());
    let json = stdout_of(&out);
    let bulk = json_number(&json, "bulk");
    assert!((bulk - 0.062022154).abs() < 1e-6, "bulk = {bulk}");

    let _ = std::fs::remove_file(&series);
}

#[test]
fn two_point_sweep_has_eight_rows() {
    let series = temp_path("two-point.csv");
    let series_str = series.to_str().unwrap();
    let out = pairkit(&[
        "sweep",
        "--class",
        "su4-rg",
        "--g",
        "0.15",
        "--solver",
        "bcs",
        "--variable",
        "omega",
        "--values",
        "160,1000",
        "--out",
        series_str,
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&series).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 4);
    let _ = std::fs::remove_file(&series);
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let a = temp_path("det-a.csv");
    let b = temp_path("det-b.csv");
    for (path, threads) in [(&a, "1"), (&b, "2")] {
        let out = pairkit(&[
            "sweep",
            "--class",
            "su4-rg",
            "--g",
            "0.15",
            "--solver",
            "ed",
            "--variable",
            "omega",
            "--values",
            "3,4",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "thread count changed the artifact");

    // literal rerun reproduces the bytes too
    let out = pairkit(&[
        "sweep",
        "--class",
        "su4-rg",
        "--g",
        "0.15",
        "--solver",
        "ed",
        "--variable",
        "omega",
        "--values",
        "3,4",
        "--threads",
        "2",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), bytes_a);
    let _ = std::fs::remove_file(&a);
    let _ = std::fs::remove_file(&b);
}

#[test]
fn config_file_run_with_overrides() {
    let cfg = temp_path("run.ini");
    std::fs::write(
        &cfg,
        "[model]\nclass = su4-seniority\nomega = 2\nn = 4\nG = 1.0\n\n[task]\nkind = ed\nk = 2\n\n[output]\nformat = json\n",
    )
    .unwrap();
    let out = pairkit(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout_of(&out).contains("\"energies\":[-8.00000000,"));

    // an override switches the sector
    let out = pairkit(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--set",
        "model.n=2",
    ]);
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("\"energies\":[-2.00000000,"));
    let _ = std::fs::remove_file(&cfg);
}

#[test]
fn invalid_config_exits_3_with_json_error() {
    let cfg = temp_path("bad.ini");
    std::fs::write(&cfg, "[model]\nomga = 2\n").unwrap();
    let out = pairkit(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().next().unwrap_or("");
    assert!(
        line.starts_with("{\"error\":") && line.ends_with("\"exit\":3}"),
        "stderr: {stderr}"
    );
    let _ = std::fs::remove_file(&cfg);

    // unknown flag values behave the same way
    let out = pairkit(&[
        "seniority",
        "--model",
        "wat",
        "--omega",
        "2",
        "--big-g",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dimension_cap_exits_4() {
    let out = pairkit(&[
        "ed",
        "--class",
        "su4-rg",
        "--g",
        "0.15",
        "--omega",
        "8",
        "--n",
        "16",
        "--dim-cap",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"exit\":4"), "stderr: {stderr}");
}

#[test]
fn missing_input_exits_nonzero_with_context() {
    let out = pairkit(&["extrapolate", "--input", "/nonexistent/file.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("/nonexistent/file.csv"));
}

#[test]
fn negative_coupling_is_rejected() {
    let out = pairkit(&["bcs-bulk", "--g", "-0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn csv_request_on_json_only_tasks_is_rejected() {
    let out = pairkit(&["bcs-bulk", "--g", "0.15", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("csv output is not available"), "{stderr}");
}

#[test]
fn spin32_class_is_exposed() {
    let out = pairkit(&[
        "ed",
        "--class",
        "spin32-rg",
        "--omega",
        "2",
        "--n",
        "2",
        "--big-g",
        "1",
        "--levels",
        "0,0",
        "--k",
        "1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    // degenerate spin-3/2 pair condensate at -2G
    assert!(stdout_of(&out).contains("\"energies\":[-2.00000000]"));
}

#[test]
fn unreachable_tolerance_exits_2() {
    // a residual target below machine precision cannot converge
    let out = pairkit(&[
        "ed",
        "--class",
        "su4-seniority",
        "--omega",
        "2",
        "--n",
        "4",
        "--big-g",
        "1",
        "--k",
        "2",
        "--tol",
        "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("\"exit\":2"), "stderr: {stderr}");
}

#[test]
fn verify_passes_on_a_fresh_build() {
    let out = pairkit(&["verify"]);
    assert!(out.status.success(), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("PASS bcs-bulk-constants"));
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("0 failed"));
}
