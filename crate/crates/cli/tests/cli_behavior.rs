//! End-to-end behavior of the `superpose` binary: exit codes, file formats,
//! config merging, and schema conformance of every JSON artifact.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superpose"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    let text = std::fs::read_to_string(path).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, output: &Output) -> serde_json::Value {
    assert!(output.status.success(), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(&value)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}\n{value}");
    value
}

#[test]
fn fixtures_load_to_exact_coordinates() {
    let text = std::fs::read_to_string(fixture("two_feature.A.txt")).unwrap();
    let a = superpose_core::io::parse_matrix_text(&text).unwrap();
    let s3 = 3.0_f64.sqrt();
    assert_eq!(a.get(0, 0), 0.5);
    assert_eq!(a.get(1, 0), s3 / 2.0);
    assert_eq!(a.get(0, 1), 1.0);
    assert_eq!(a.get(1, 1), 0.0);
    let text = std::fs::read_to_string(fixture("two_feature.B.txt")).unwrap();
    let b = superpose_core::io::parse_matrix_text(&text).unwrap();
    assert_eq!(b.get(0, 0), 0.0);
    assert_eq!(b.get(1, 0), 2.0 / s3);
    assert_eq!(b.get(0, 1), 1.0);
    assert_eq!(b.get(1, 1), -1.0 / s3);
}

#[test]
fn check_output_validates_and_reports_zero_error() {
    let out = bin()
        .args(["check", "--k", "2", "--eps", "0.01", "--deterministic"])
        .arg("--a")
        .arg(fixture("two_feature.A.txt"))
        .arg("--b")
        .arg(fixture("two_feature.B.txt"))
        .output()
        .unwrap();
    let value = assert_valid(&schema("check.schema.json"), &out);
    assert!(value["max_error"].as_f64().unwrap() <= 1e-12);
    assert_eq!(value["recovered"], serde_json::json!(true));
}

#[test]
fn geometry_output_validates_in_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let status = bin()
        .args(["gen", "--kind", "gaussian", "--d", "24", "--m", "6", "--seed", "5"])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());

    let v = schema("geometry.schema.json");
    let out = bin()
        .args(["geometry", "--delta", "0.3", "--tol", "0.1", "--deterministic"])
        .arg("--a")
        .arg(&path)
        .arg("--b")
        .arg(&path)
        .output()
        .unwrap();
    assert_valid(&v, &out);

    let out = bin()
        .args(["geometry", "--eps", "0.5", "--gamma", "1.0", "--deterministic"])
        .arg("--a")
        .arg(&path)
        .arg("--b")
        .arg(&path)
        .output()
        .unwrap();
    let value = assert_valid(&v, &out);
    assert_eq!(value["bounds_checked"]["mode"], "norm_bounded");
}

#[test]
fn geometry_rejects_mode_confusion() {
    let a = fixture("two_feature.A.txt");
    // both modes at once
    let out = bin()
        .args(["geometry", "--delta", "0.3", "--tol", "0.1", "--eps", "0.5", "--gamma", "1.0"])
        .arg("--a")
        .arg(&a)
        .arg("--b")
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // neither mode
    let out = bin()
        .args(["geometry"])
        .arg("--a")
        .arg(&a)
        .arg("--b")
        .arg(&a)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn threshold_output_validates_with_transform() {
    let out = bin()
        .args(["threshold", "--k", "2", "--sigma", "tanh", "--deterministic"])
        .arg("--a")
        .arg(fixture("two_feature.A.txt"))
        .arg("--b")
        .arg(fixture("two_feature.B.txt"))
        .output()
        .unwrap();
    let value = assert_valid(&schema("threshold.schema.json"), &out);
    assert_eq!(value["separable"], serde_json::json!(true));
    assert_eq!(value["transform"]["separable"], serde_json::json!(true));
}

#[test]
fn interfere_output_validates_with_turan_and_alpha() {
    let out = bin()
        .args(["interfere", "--tau", "0.1", "--r", "2.0", "--exact-alpha", "--deterministic"])
        .arg("--a")
        .arg(fixture("two_feature.A.txt"))
        .arg("--b")
        .arg(fixture("two_feature.B.txt"))
        .output()
        .unwrap();
    let value = assert_valid(&schema("interfere.schema.json"), &out);
    assert_eq!(value["edge_count"], serde_json::json!(0));
    assert_eq!(value["exact_independence_number"], serde_json::json!(2));
    assert_eq!(value["turan_floor"]["floor"], serde_json::json!(0.0));
}

#[test]
fn gen_json_matrix_validates_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let status = bin()
        .args(["gen", "--kind", "rademacher", "--d", "5", "--m", "4", "--seed", "8"])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let errors: Vec<String> = schema("matrix.schema.json")
        .iter_errors(&value)
        .map(|e| e.to_string())
        .collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    let m: superpose_core::DenseMatrix = serde_json::from_str(&text).unwrap();
    assert_eq!((m.rows(), m.cols()), (5, 4));
}

#[test]
fn gen_text_matrix_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    let status = bin()
        .args(["gen", "--kind", "gaussian", "--d", "7", "--m", "5", "--seed", "123"])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = superpose_core::io::parse_matrix_text(&text).unwrap();
    let direct = superpose_core::gaussian_unit_matrix(7, 5, 123).unwrap();
    assert_eq!(parsed, direct, "file round trip must be exact");
}

#[test]
fn gen_shifted_writes_pair_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair");
    let status = bin()
        .args([
            "gen", "--kind", "shifted", "--d", "16500", "--m", "8", "--seed", "4", "--delta",
            "0.25", "--eps", "0.5", "--k", "2",
        ])
        .arg("--out")
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("pair.A").exists());
    assert!(dir.path().join("pair.B").exists());
}

#[test]
fn wrong_column_count_cites_line_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "3 3\n1 2 3\n4 5\n6 7 8\n").unwrap();
    let out = bin()
        .args(["check", "--k", "1", "--eps", "0.1"])
        .arg("--a")
        .arg(&path)
        .arg("--b")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr must cite line 3: {stderr}");
}

#[test]
fn missing_parameter_is_usage_error() {
    let out = bin().args(["scan", "--m", "8"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--k"), "stderr should name the missing flag: {stderr}");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scan.json");
    std::fs::write(
        &cfg,
        r#"{"m": 8, "k": 1, "eps": 0.6, "trials": 4, "threshold": 0.5,
           "dmin": 2, "dmax": 16, "seed": 7, "deterministic": true}"#,
    )
    .unwrap();
    let from_config = bin()
        .arg("scan")
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(from_config.status.success());
    // overriding the seed must change the outcome deterministically
    let overridden = bin()
        .args(["scan", "--seed", "8"])
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(overridden.status.success());
    let direct = bin()
        .args([
            "scan", "--m", "8", "--k", "1", "--eps", "0.6", "--trials", "4", "--threshold",
            "0.5", "--dmin", "2", "--dmax", "16", "--seed", "8", "--deterministic",
        ])
        .output()
        .unwrap();
    assert_eq!(overridden.stdout, direct.stdout);
    assert_ne!(from_config.stdout, overridden.stdout);
}

#[test]
fn scan_csv_has_header_and_metadata() {
    let out = bin()
        .args([
            "scan", "--m", "8", "--k", "1", "--eps", "0.6", "--trials", "4", "--threshold",
            "0.5", "--dmin", "2", "--dmax", "16", "--seed", "7", "--deterministic",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,successes,trials"));
    assert!(text.contains("# d_star="));
    assert!(text.contains("# eps_in_quadratic_regime="));
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "scan", "--m", "16", "--k", "2", "--eps", "0.6", "--trials", "8", "--threshold", "0.5",
        "--dmin", "2", "--dmax", "64", "--seed", "5", "--deterministic",
    ];
    let capped = bin().args(args).env("SUPERPOSE_THREADS", "1").output().unwrap();
    let free = bin().args(args).output().unwrap();
    assert!(capped.status.success() && free.status.success());
    assert_eq!(capped.stdout, free.stdout, "output must be schedule-independent");
}

#[test]
fn timestamp_present_without_deterministic_flag() {
    let out = bin()
        .args(["check", "--k", "2", "--eps", "0.01"])
        .arg("--a")
        .arg(fixture("two_feature.A.txt"))
        .arg("--b")
        .arg(fixture("two_feature.B.txt"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value.get("generated_at_unix").is_some());
}
