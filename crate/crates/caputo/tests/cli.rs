//! End-to-end checks of the `caputo` binary: subcommands, outputs, exit codes.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_caputo"))
}

#[test]
fn solve_lists_the_registry() {
    let out = bin().args(["solve", "--list"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for id in [
        "example1",
        "example2-linear",
        "example2-nonlinear",
        "example3",
        "example3-nu1",
    ] {
        assert!(text.contains(id), "missing {id} in: {text}");
    }
}

#[test]
fn solve_emits_a_trajectory() {
    let out = bin()
        .args([
            "solve",
            "--problem",
            "example1",
            "--nu",
            "0.5",
            "--levels",
            "4",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("x,y,exact,error\n"));
    assert_eq!(text.lines().count(), 18); // header + 17 grid points
}

#[test]
fn study_csv_round_trips_through_the_parser() {
    let out = bin()
        .args([
            "study",
            "--problem",
            "example1",
            "--nu",
            "0.5",
            "--levels",
            "3,4,5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("# problem=example1 nu=0.5"));
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| format!("{l}\n"))
        .collect();
    let rows = caputo::study::parse_csv_report(&body).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[2].order.is_some());
}

#[test]
fn study_markdown_mirrors_the_table_layout() {
    let out = bin()
        .args([
            "study",
            "--problem",
            "example3",
            "--nu",
            "0.3,0.6",
            "--levels",
            "3,4",
            "--corrected",
            "--sigma-rule",
            "k*nu:3",
            "--format",
            "markdown",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("| dx | nu=0.3 | order | nu=0.6 | order |"));
    assert!(text.contains("| 1/8 |"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = std::env::temp_dir().join("caputo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("study.json");
    std::fs::write(
        &cfg_path,
        r#"{"problem": "example1", "nu": [0.5], "levels": [3, 4], "t": 1.0}"#,
    )
    .unwrap();
    let out_path = dir.join("report.csv");
    let out = bin()
        .args([
            "study",
            "--config",
            cfg_path.to_str().unwrap(),
            "--nu",
            "0.8",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("nu=0.8"), "flag override lost: {text}");
}

#[test]
fn parse_errors_exit_with_4_and_help_with_0() {
    let out = bin()
        .args([
            "study",
            "--problem",
            "example1",
            "--nu",
            "0.5",
            "--levels",
            "3",
            "--format",
            "yaml",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = bin().args(["--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_configuration_exits_with_4() {
    let out = bin()
        .args([
            "study",
            "--problem",
            "example1",
            "--nu",
            "0.5",
            "--levels",
            "4,3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = bin()
        .args(["study", "--problem", "nope", "--nu", "0.5", "--levels", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn verify_runs_green_on_reduced_grids() {
    let out = bin()
        .args(["verify", "--index-max", "40", "--kernel-max", "12"])
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "verify failed:\n{text}");
    assert!(text.contains("[PASS] lemma_3_1"));
    assert!(text.contains("checks passed"));
}
