//! End-to-end runs of the binary: exit codes, report contents, table round
//! trips.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bigphase::table::GwTable;
use bigphase_core::genfun::build_point_genfun;
use bigphase_core::series::q;
use bigphase_core::{GenusDegrees, VarWindow};
use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigphase")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Exports point data at `degree` into a fresh directory.
fn export_point(degree: u32) -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let d = degree.to_string();
    let o = bin(&[
        "export",
        "--model",
        "point",
        "--degree",
        &d,
        "--suite",
        "string-equation",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = dir.path().join("gw_table.json");
    (dir, table)
}

#[test]
fn verify_point_full_catalog_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["verify", "--model", "point", "--degree", "6", "--max-level", "8", "--out", path_str(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&dir.path().join("report.json"));
    assert_eq!(r["summary"]["fail"], 0);
    assert!(r["summary"]["pass"].as_u64().unwrap() > 100);
    assert_eq!(r["run"]["max_level"], 14);
    assert!(r["notes"][0].as_str().unwrap().contains("max_level raised from 8 to 14"));
    let text = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.contains("PASS trr1 [trr]"));
}

#[test]
fn verify_suite_filter_runs_single_entry() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["verify", "--suite", "trr1", "--model", "point", "--out", path_str(dir.path())]);
    assert_eq!(code(&o), 0);
    let r = json(&dir.path().join("report.json"));
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["id"], "trr1");
    assert_eq!(checks[0]["status"], "pass");
}

#[test]
fn verify_suite_accepts_lists_and_tags() {
    let o = bin(&["verify", "--suite", "string-equation,dilaton-equation", "--suite", "c8"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    for id in ["string-equation", "dilaton-equation", "virasoro-constraints", "rho1-alt"] {
        assert!(out.contains(&format!("PASS {id} ")), "{id} missing from\n{out}");
    }
}

#[test]
fn corrupted_table_fails_naming_check_and_monomial() {
    let (dir, table) = export_point(6);
    let text = std::fs::read_to_string(&table).unwrap();
    std::fs::write(&table, text.replacen("\"1/1152\"", "\"1/1000\"", 1)).unwrap();
    let out = dir.path().join("corrupt");
    let o = bin(&["verify", "--gw-table", path_str(&table), "--suite", "c8", "--out", path_str(&out)]);
    assert_eq!(code(&o), 1);
    let r = json(&out.join("report.json"));
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert_eq!(failed[0]["id"], "virasoro-constraints");
    let off = &failed[0]["first_offending"];
    assert!(off["monomial"].is_string());
    assert_ne!(off["coefficient"], "0/1");
}

#[test]
fn solve_point_degree_four_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["solve-f2", "--model", "point", "--shift", "1", "--degree", "4", "--out", path_str(dir.path())]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let r = json(&dir.path().join("report.json"));
    assert_eq!(r["comparison"]["diff"].as_array().unwrap().len(), 0);
    let inv = r["invariants"].as_array().unwrap();
    let tau4 = inv.iter().find(|i| i["levels"] == serde_json::json!([4])).unwrap();
    assert_eq!(tau4["value"], "1/1152");
    let f2 = r["f2"]["terms"].as_array().unwrap();
    assert!(f2.iter().all(|t| t["coefficient"].as_str().unwrap().contains('/')));
}

#[test]
fn solve_at_origin_is_a_solver_error() {
    let o = bin(&["solve-f2", "--model", "point", "--shift", "0", "--degree", "4"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("degenerate base point"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn solve_compare_with_exported_table_has_empty_diff() {
    let (_dir, table) = export_point(6);
    let o = bin(&["solve-f2", "--compare", path_str(&table), "--degree", "6"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains(": 0 differences"));
}

#[test]
fn solve_compare_with_corrupted_table_reports_diff() {
    let (_dir, table) = export_point(6);
    let text = std::fs::read_to_string(&table).unwrap();
    std::fs::write(&table, text.replacen("\"1/1152\"", "\"1/1000\"", 1)).unwrap();
    let o = bin(&["solve-f2", "--compare", path_str(&table), "--degree", "6"]);
    assert_eq!(code(&o), 1);
    assert!(!stdout(&o).contains(": 0 differences"));
}

#[test]
fn solve_from_table_reconstructs_from_genus_zero_and_one() {
    let (_dir, table) = export_point(4);
    let o = bin(&["solve-f2", "--gw-table", path_str(&table), "--degree", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("1/1152 * t4"));
}

#[test]
fn export_then_ingest_gives_identical_genfun() {
    let (_dir, table) = export_point(5);
    let t = GwTable::read(&table).unwrap();
    assert_eq!(t.degree, Some(5));
    let deg = GenusDegrees::for_target(5);
    let w = VarWindow::new(deg.required_max_level(), 1).unwrap();
    for shift in [q(1, 1), q(-2, 3)] {
        let (ingested, warnings) = t.genfun(w, deg, &shift).unwrap();
        assert!(warnings.is_empty(), "{warnings:?}");
        assert_eq!(ingested, build_point_genfun(w, deg, &shift, true).unwrap());
    }
}

#[test]
fn export_writes_text_and_structured_reports() {
    let (dir, _) = export_point(5);
    let r = json(&dir.path().join("report.json"));
    assert_eq!(r["command"], "export");
    assert_eq!(r["table"], "gw_table.json");
    assert!(r["records_by_genus"][2].as_u64().unwrap() > 0);
    let text = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(text.starts_with("exported gw_table.json"));
}

#[test]
fn export_re_export_is_byte_identical() {
    let (dir, table) = export_point(4);
    let again = dir.path().join("again");
    let o = bin(&[
        "export",
        "--gw-table",
        path_str(&table),
        "--degree",
        "4",
        "--suite",
        "string-equation",
        "--out",
        path_str(&again),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read(&table).unwrap(), std::fs::read(again.join("gw_table.json")).unwrap());
}

#[test]
fn export_beyond_built_degree_is_an_error() {
    let (dir, table) = export_point(4);
    let out = dir.path().join("more");
    let o = bin(&["export", "--gw-table", path_str(&table), "--degree", "6", "--out", path_str(&out)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("only complete through degree 4"));
    assert!(!out.exists());
}

#[test]
fn export_needs_an_output_directory() {
    let o = bin(&["export", "--model", "point", "--degree", "4"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn reports_do_not_depend_on_parallelism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let o = bin(&["verify", "--suite", "c1", "--jobs", jobs, "--out", path_str(dir.path())]);
        assert_eq!(code(&o), 0);
    }
    for f in ["report.json", "report.txt"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn input_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--suite", "no-such-check"],
        vec!["verify", "--shift", "0.5"],
        vec!["verify", "--shift", "1/0"],
        vec!["verify", "--no-such-flag"],
        vec!["verify", "--model", "point", "--gw-table", "x.json"],
        vec!["verify", "--gw-table", path_str(&missing)],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = bin(&args);
        assert_eq!(code(&o), 3, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn malformed_and_invalid_tables_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("decimal.json", r#"{"model":{"N":1,"eta":["1"],"b":["0.5"],"chern":["0"]},"records":[]}"#),
        ("shape.json", r#"{"model":{"N":2,"eta":["1"],"b":["0","1"],"chern":["0"]},"records":[]}"#),
        (
            "grading.json",
            r#"{"model":{"N":2,"eta":["0","1","1","0"],"b":["0","0"],"chern":["0","0","0","0"]},"records":[]}"#,
        ),
        ("no-genus-zero.json", r#"{"model":{"N":1,"eta":["1"],"b":["1/2"],"chern":["0"]},"records":[]}"#),
        (
            "class.json",
            r#"{"model":{"N":1,"eta":["1"],"b":["1/2"],"chern":["0"]},"records":[{"genus":0,"insertions":[[0,2]],"value":"1"}]}"#,
        ),
        ("junk.json", "not json"),
    ];
    for (name, body) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        let o = bin(&["verify", "--gw-table", path_str(&p), "--degree", "4", "--suite", "trr1"]);
        assert_eq!(code(&o), 3, "{name}: {}", stderr(&o));
    }
    let o = bin(&["verify", "--gw-table", path_str(&dir.path().join("grading.json")), "--degree", "4"]);
    assert!(stderr(&o).contains("pairing-grading violation"));
}

#[test]
fn help_exits_zero() {
    let o = bin(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("solve-f2"));
}
