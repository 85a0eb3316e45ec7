//! End-to-end tests of the command-line interface and its exit-code
//! contract (0 ok, 1 gated failure, 2 input error, 3 numerical
//! precondition).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ballbesov")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const Z_SERIES: &str = r#"{"dim":1,"max_degree":4,"terms":[{"m":[1],"re":1.0,"im":0.0}]}"#;
const FLAT_WEIGHT: &str = r#"{"type":"power","a":0.0}"#;

#[test]
fn norm_end_to_end_sqrt2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", Z_SERIES);
    let w = write(dir.path(), "w.json", FLAT_WEIGHT);
    let out = run(&[
        "norm",
        "--series",
        f.to_str().unwrap(),
        "--p",
        "2",
        "--weight",
        w.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["norm"]["value"].as_f64().unwrap();
    assert!((value - 2f64.sqrt()).abs() < 1e-7);
    assert_eq!(v["norm"]["convergence_flag"], serde_json::Value::Bool(true));
    assert!(v["seed"].is_u64());
}

#[test]
fn norm_of_zero_series_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "zero.json",
        r#"{"dim":1,"max_degree":3,"terms":[]}"#,
    );
    let w = write(dir.path(), "w.json", FLAT_WEIGHT);
    let out = run(&[
        "norm",
        "--series",
        f.to_str().unwrap(),
        "--p",
        "2",
        "--weight",
        w.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["norm"]["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn norm_invalid_json_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{this is not json");
    let w = write(dir.path(), "w.json", FLAT_WEIGHT);
    let out = run(&[
        "norm",
        "--series",
        f.to_str().unwrap(),
        "--p",
        "2",
        "--weight",
        w.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty(), "diagnostic expected on stderr");
}

#[test]
fn norm_divergent_parameters_exit_3() {
    // p = 1, n = 1, omega == 1 diverges
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "f.json", Z_SERIES);
    let w = write(dir.path(), "w.json", FLAT_WEIGHT);
    let out = run(&[
        "norm",
        "--series",
        f.to_str().unwrap(),
        "--p",
        "1",
        "--weight",
        w.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // --unchecked turns it into a flagged reading
    let out = run(&[
        "norm",
        "--series",
        f.to_str().unwrap(),
        "--p",
        "1",
        "--weight",
        w.to_str().unwrap(),
        "--unchecked",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["norm"]["unchecked"], serde_json::Value::Bool(true));
}

#[test]
fn apply_multiplier_identity_verbatim() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(
        dir.path(),
        "one.json",
        r#"{"dim":1,"max_degree":0,"terms":[{"m":[0],"re":1.0,"im":0.0}]}"#,
    );
    let f = write(dir.path(), "f.json", Z_SERIES);
    let spec = write(
        dir.path(),
        "op.json",
        &format!(
            r#"{{"op":"M","alpha":0.0,"h":"{}","K_kernel":4,"K_out":4}}"#,
            one.file_name().unwrap().to_str().unwrap()
        ),
    );
    let out = run(&[
        "apply",
        "--spec",
        spec.to_str().unwrap(),
        "--series",
        f.to_str().unwrap(),
        "--mode",
        "exact",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let input: serde_json::Value = serde_json::from_str(Z_SERIES).unwrap();
    assert_eq!(v["series"]["terms"], input["terms"]);
}

#[test]
fn apply_exact_with_verify_reports_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(
        dir.path(),
        "one.json",
        r#"{"dim":1,"max_degree":0,"terms":[{"m":[0],"re":1.0,"im":0.0}]}"#,
    );
    let f = write(dir.path(), "f.json", Z_SERIES);
    let spec = write(
        dir.path(),
        "op.json",
        &format!(
            r#"{{"alpha":0.0,"h":"{}","K_kernel":6,"K_out":4}}"#,
            one.file_name().unwrap().to_str().unwrap()
        ),
    );
    let points = write(dir.path(), "pts.json", r#"{"points":[[[0.3,0.0]],[[0.0,0.5]]]}"#);
    let out = run(&[
        "apply",
        "--spec",
        spec.to_str().unwrap(),
        "--series",
        f.to_str().unwrap(),
        "--mode",
        "exact",
        "--verify",
        "--points-file",
        points.to_str().unwrap(),
        "--sphere-degree",
        "24",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let dev = v["verify_max_deviation"].as_f64().unwrap();
    assert!(dev < 1e-10, "exact and quadrature paths disagree: {dev}");
}

#[test]
fn apply_quad_without_points_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(
        dir.path(),
        "one.json",
        r#"{"dim":1,"max_degree":0,"terms":[{"m":[0],"re":1.0,"im":0.0}]}"#,
    );
    let f = write(dir.path(), "f.json", Z_SERIES);
    let spec = write(
        dir.path(),
        "op.json",
        &format!(
            r#"{{"alpha":0.0,"h":"{}","K_kernel":6,"K_out":4}}"#,
            one.file_name().unwrap().to_str().unwrap()
        ),
    );
    let out = run(&[
        "apply",
        "--spec",
        spec.to_str().unwrap(),
        "--series",
        f.to_str().unwrap(),
        "--mode",
        "quad",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn apply_insufficient_truncation_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(
        dir.path(),
        "one.json",
        r#"{"dim":1,"max_degree":0,"terms":[{"m":[0],"re":1.0,"im":0.0}]}"#,
    );
    let f = write(dir.path(), "f.json", Z_SERIES);
    let spec = write(
        dir.path(),
        "op.json",
        &format!(
            r#"{{"alpha":0.0,"h":"{}","K_kernel":2,"K_out":4}}"#,
            one.file_name().unwrap().to_str().unwrap()
        ),
    );
    let out = run(&[
        "apply",
        "--spec",
        spec.to_str().unwrap(),
        "--series",
        f.to_str().unwrap(),
        "--mode",
        "exact",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validate_lemma5_is_fast_and_green() {
    let start = std::time::Instant::now();
    let out = run(&["validate", "lemma5"]);
    assert!(out.status.success());
    assert!(start.elapsed().as_secs_f64() < 2.0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lemma5"));
    assert!(text.contains("PASS"));
}

#[test]
fn validate_unknown_check_exits_2() {
    let out = run(&["validate", "lemma99"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "validate",
        "lemma5",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.path().join("lemma5.json").exists());
    assert!(dir.path().join("lemma5.txt").exists());
    assert!(dir.path().join("summary.txt").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("lemma5.json")).unwrap())
            .unwrap();
    assert_eq!(report["check_id"], "lemma5");
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
}

#[test]
fn sweep_empty_grid_yields_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(
        dir.path(),
        "g.json",
        r#"{"n":1,"alpha":0.0,"beta":1.0,"weight":{"type":"power","a":0.0},"radii":[]}"#,
    );
    let out = run(&["sweep", "--grid", grid.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "r,lhs,rhs,ratio\n");
}

#[test]
fn sweep_bounded_and_exploratory_columns() {
    let dir = tempfile::tempdir().unwrap();
    // hypothesis-satisfying: bounded ratio column
    let good = write(
        dir.path(),
        "good.json",
        r#"{"n":1,"alpha":0.0,"beta":1.0,"weight":{"type":"power","a":0.0},"j_max":8}"#,
    );
    let out = run(&["sweep", "--grid", good.to_str().unwrap()]);
    assert!(out.status.success());
    let ratios: Vec<f64> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 9);
    assert!(ratios.iter().all(|r| r.is_finite() && *r < 2.0));

    // hypothesis-violating: the ratio column grows monotonically
    let blowup = write(
        dir.path(),
        "blowup.json",
        r#"{"n":1,"alpha":0.0,"beta":0.5,"weight":{"type":"power","a":-1.0},"j_max":8}"#,
    );
    let out = run(&["sweep", "--grid", blowup.to_str().unwrap()]);
    assert!(out.status.success());
    let ratios: Vec<f64> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] >= w[0]), "{ratios:?}");
    assert!(ratios.last().unwrap() / ratios.first().unwrap() > 5.0);
}

#[test]
fn sweep_to_file_and_malformed_grid() {
    let dir = tempfile::tempdir().unwrap();
    let grid = write(
        dir.path(),
        "g.json",
        r#"{"n":1,"alpha":0.0,"beta":1.0,"weight":{"type":"power","a":0.0},"j_max":3}"#,
    );
    let csv_path = dir.path().join("out.csv");
    let out = run(&[
        "sweep",
        "--grid",
        grid.to_str().unwrap(),
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.starts_with("r,lhs,rhs,ratio\n"));
    assert_eq!(csv.lines().count(), 5);

    let bad = write(dir.path(), "bad.json", "{\"n\": }");
    let out = run(&["sweep", "--grid", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
