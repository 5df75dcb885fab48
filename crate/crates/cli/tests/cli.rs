use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn rdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdlab")).args(args).output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = rdlab(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn bound_for_degree_seven() {
    let v = json_ok(&["bound", "--n", "7"]);
    assert_eq!(v["bound"], 3);
    assert_eq!(json_ok(&["bound", "--n", "25"])["bound"], 20);
    assert_eq!(json_ok(&["bound", "--group", "W(E6)"])["bound"], 3);
}

#[test]
fn kontsevich_count() {
    assert_eq!(json_ok(&["count", "--kontsevich", "4"])["kontsevich"]["count"], "620");
}

#[test]
fn reduce_quintic_census() {
    let path = corpus("quintic.json");
    let v = json_ok(&["reduce", "--input", path.to_str().unwrap()]);
    let kinds = v["steps"].as_array().unwrap();
    let radical = kinds.iter().filter(|k| k["kind"] == "radical-adjunction" && k["degree"] == 2).count();
    let cubic = kinds.iter().filter(|k| k["kind"] == "auxiliary-cubic").count();
    assert_eq!((radical, cubic), (4, 1));
}

#[test]
fn solve_recovers_all_roots() {
    let path = corpus("septic.json");
    let v = json_ok(&["solve", "--input", path.to_str().unwrap()]);
    assert_eq!(v["solution"]["roots"]["roots"].as_array().unwrap().len(), 7);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = rdlab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(rdlab(&[]).status.code(), Some(64));
}

#[test]
fn invalid_inputs_exit_with_two() {
    let bad_catalogue = corpus("catalogue_missing_citation.json");
    let cases: [&[&str]; 6] = [
        &["reduce", "--input", "/nonexistent/poly.json"],
        &["monodromy", "--family", "conics:5"],
        &["bound", "--group", "W(E6)", "--catalogue", bad_catalogue.to_str().unwrap()],
        &["bound", "--n", "7", "--tol", "-1"],
        &["count", "--kontsevich", "0"],
        &["bound"],
    ];
    for args in cases {
        assert_eq!(rdlab(args).status.code(), Some(2), "{args:?}");
    }
    let out = rdlab(&["bound", "--group", "W(E6)", "--catalogue", bad_catalogue.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`W(E6)`"));
}

#[test]
fn failed_numerical_check_exits_with_three_and_a_diagnostic() {
    let path = corpus("quintic.json");
    let out = rdlab(&["solve", "--input", path.to_str().unwrap(), "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "check-failed");
    assert!(v["diagnostic"]["solution"].is_object());
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["monodromy", "--family", "bezout:2,2", "--loops", "6", "--seed", "9"];
    let a = rdlab(&args);
    let b = rdlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let dir = std::env::temp_dir().join(format!("rdlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("lines.json");
    let mut with_out = vec!["lines", "--seed", "4", "--out", file.to_str().unwrap()];
    assert_eq!(rdlab(&with_out).status.code(), Some(0));
    with_out.truncate(3);
    assert_eq!(std::fs::read(&file).unwrap(), rdlab(&with_out).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selftest_reports_each_criterion() {
    let v = json_ok(&["selftest", "--only", "3", "--only", "11"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
}

#[test]
fn lines_from_a_seed_line_and_from_points() {
    let surface = corpus("clebsch.json");
    let line = corpus("clebsch_line.json");
    let v = json_ok(&["lines", "--surface", surface.to_str().unwrap(), "--seed-line", line.to_str().unwrap()]);
    assert_eq!(v["configuration"]["lines"].as_array().unwrap().len(), 27);
    assert_eq!(v["srg"], serde_json::json!([10, 1, 5]));
    let points = corpus("six_points.json");
    let v = json_ok(&["lines", "--from-points", points.to_str().unwrap()]);
    assert_eq!(v["configuration"]["labels"].as_array().unwrap().len(), 27);
    assert_eq!(v["double_sixes"], 36);
    let off = corpus("quartic_t1.json");
    assert_eq!(rdlab(&["lines", "--seed-line", off.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn bitangents_from_two_and_from_cubic() {
    let curve = corpus("quartic.json");
    let (t1, t2) = (corpus("quartic_t1.json"), corpus("quartic_t2.json"));
    let v = json_ok(&[
        "bitangents",
        "--curve",
        curve.to_str().unwrap(),
        "--two",
        t1.to_str().unwrap(),
        t2.to_str().unwrap(),
        "--classify",
    ]);
    assert_eq!(v["bitangents"].as_array().unwrap().len(), 28);
    assert_eq!(v["configurations"]["steiner"]["lo"], 63);
    assert_eq!(v["configurations"]["aronhold"]["hi"], 288);
    let surface = corpus("clebsch.json");
    let v = json_ok(&["bitangents", "--from-cubic", surface.to_str().unwrap()]);
    assert_eq!(v["bitangents"].as_array().unwrap().len(), 28);
}
