//! End-to-end runs of the `tridiag` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn tridiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tridiag"))
        .args(args)
        .env_remove("TRIDIAG_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write_spec(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn describe_reports_strong_regime() {
    let o = tridiag(&["describe", "--spec", spec("example-a.json").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("bounded"), "{}", stdout(&o));
}

#[test]
fn missing_spec_is_a_parse_error() {
    let o = tridiag(&["describe"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_parse_error() {
    let o = tridiag(&["classify", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zero_override_names_its_index() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(&dir, "bad.json", r#"{"a": {}, "b": {"overrides": {"7": [0, 0]}}}"#);
    let o = tridiag(&["describe", "--spec", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b.overrides.7"), "{}", stderr(&o));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(&dir, "broken.json", "{\n  \"a\": {,\n}");
    let o = tridiag(&["describe", "--spec", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("broken.json:2:"), "{}", stderr(&o));
}

#[test]
fn zero_lambda_is_a_domain_error() {
    let o = tridiag(&[
        "classify",
        "--spec",
        spec("example-a.json").to_str().unwrap(),
        "--lambda",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn uncertified_norms_exit_four() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(&dir, "edge.json", r#"{"a": {}, "b": {"coeff": 1}}"#);
    let o = tridiag(&["norms", "--spec", &p, "--n", "5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("uncertified"));
}

#[test]
fn json_envelope_carries_spec_hash() {
    let path = spec("example-a.json");
    let o = tridiag(&["classify", "--spec", path.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    let expected = hex::encode(Sha256::digest(std::fs::read(&path).unwrap()));
    assert_eq!(v["spec_sha256"], expected.as_str());
    assert_eq!(v["command"], "classify");
    assert_eq!(v["tool"], "tridiag");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let path = spec("bergman.json");
    let args = [
        "spectrum",
        "--spec",
        path.to_str().unwrap(),
        "--json",
        "--n",
        "20",
        "--horizon",
        "200",
    ];
    let (first, second) = (tridiag(&args), tridiag(&args));
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn matrix_csv_first_column_alternates() {
    let o = tridiag(&[
        "matrix",
        "--spec",
        spec("example-a.json").to_str().unwrap(),
        "--n",
        "8",
        "--csv",
    ]);
    assert!(o.status.success());
    let expected = [
        "0.5",
        "-0.25",
        "0.125",
        "-0.0625",
        "0.03125",
        "-0.015625",
        "0.0078125",
        "-0.00390625",
    ];
    let rows: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(rows.len(), 8);
    for (row, want) in rows.iter().zip(expected) {
        let cell = row.split("\",\"").next().unwrap().trim_start_matches('"');
        assert_eq!(cell, format!("{want},0"));
    }
}

#[test]
fn out_env_overrides_out_flag() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_tridiag"))
        .args(["matrix", "--spec", spec("example-a.json").to_str().unwrap(), "--n", "4"])
        .arg("--out")
        .arg(flag_dir.path())
        .env("TRIDIAG_OUT", env_dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(env_dir.path().join("matrix.csv").exists());
    assert!(env_dir.path().join("matrix.json").exists());
    assert_eq!(std::fs::read_dir(flag_dir.path()).unwrap().count(), 0);
}

#[test]
fn geometric_spectrum_is_a_circle() {
    let o = tridiag(&[
        "spectrum",
        "--spec",
        spec("geometric.json").to_str().unwrap(),
        "--json",
        "--n",
        "10",
        "--horizon",
        "50",
    ]);
    assert!(o.status.success());
    let r = &json(&o)["report"];
    assert_eq!(r["inner"].as_f64(), Some(0.9));
    assert_eq!(r["outer"].as_f64(), Some(0.9));
}

#[test]
fn sweep_flips_chaos_above_one() {
    let o = tridiag(&[
        "classify",
        "--spec",
        spec("example-a.json").to_str().unwrap(),
        "--sweep",
        "0.5:2.0:0.125",
        "--csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 13);
    for row in rows {
        let lambda: f64 = row.split(',').next().unwrap().trim_matches('"').parse().unwrap();
        assert_eq!(row.contains("yes[4.2(iii)]"), lambda > 1.0, "{row}");
    }
}

#[test]
fn periodic_residual_matches_monomial_norm() {
    let o = tridiag(&[
        "periodic",
        "--spec",
        spec("lin-geo.json").to_str().unwrap(),
        "--period",
        "3",
        "--k",
        "100",
        "--n",
        "512",
        "--json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = &json(&o)["report"];
    assert!(r["identity_deviation"].as_f64().unwrap() < 1e-9);
}

#[test]
fn matrix_spec_vector_checks_pass() {
    let o = tridiag(&[
        "vector",
        "--spec",
        spec("matrix.json").to_str().unwrap(),
        "--samples",
        "20",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn verify_with_random_families_passes() {
    let o = tridiag(&[
        "verify",
        "--spec",
        spec("example-a.json").to_str().unwrap(),
        "--random",
        "2",
        "--seed",
        "7",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
}
