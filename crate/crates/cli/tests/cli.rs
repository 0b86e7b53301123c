//! End-to-end tests of the `mmc` binary: exit codes, file formats,
//! determinism.

use std::path::Path;
use std::process::{Command, Output};

fn mmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmc")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const TWO_POINT: &str = r#"{"n": 2, "dist": [[0.0, 1.0], [1.0, 0.0]], "weight": [0.5, 0.5]}"#;
const ASYMMETRIC: &str = r#"{"n": 2, "dist": [[0.0, 1.0], [2.0, 0.0]], "weight": [0.5, 0.5]}"#;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", TWO_POINT);
    let bad = write(dir.path(), "bad.json", ASYMMETRIC);

    assert_eq!(mmc(&["validate", &good]).status.code(), Some(0));

    let output = mmc(&["validate", &bad]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    let payload: serde_json::Value = serde_json::from_str(stderr.trim()).unwrap();
    assert_eq!(payload["kind"], "AsymmetricDistance");

    assert_eq!(mmc(&["validate", "/definitely/missing.json"]).status.code(), Some(2));
}

#[test]
fn generate_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.json");
    let path_str = path.to_string_lossy().into_owned();
    assert_eq!(
        mmc(&["generate", "--kind", "cycle:6", "-o", &path_str]).status.code(),
        Some(0)
    );
    assert_eq!(mmc(&["validate", &path_str]).status.code(), Some(0));

    // Unknown kinds and oversized requests are usage errors.
    assert_eq!(mmc(&["generate", "--kind", "torus:6"]).status.code(), Some(2));
    let overflow = mmc(&["generate", "--kind", "hypercube:13"]);
    assert_eq!(overflow.status.code(), Some(1));
    let stderr = String::from_utf8(overflow.stderr).unwrap();
    assert!(stderr.contains("SizeOverflow"));
}

#[test]
fn report_contains_worked_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.json");
    let path_str = path.to_string_lossy().into_owned();
    mmc(&["generate", "--kind", "cycle:6", "-o", &path_str]);

    let output = mmc(&["report", &path_str, "--kappa", "0.5"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&output.stdout).expect("report is JSON");
    let row = &report["expansion"][0];
    assert_eq!(row["rho"], 1.0);
    assert!((row["exp_ledoux_complement"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((row["exp_gromov"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-12);
    assert_eq!(report["doubling"]["constant"], 3.0);
    assert_eq!(report["space"]["diameter"], 3.0);
}

#[test]
fn report_single_point_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let single = write(dir.path(), "pt.json", r#"{"n":1,"dist":[[0.0]],"weight":[1.0]}"#);
    let output = mmc(&["report", &single]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["space"]["diameter"], 0.0);
    assert_eq!(report["obsdiam"]["lower"], 0.0);
}

#[test]
fn report_skips_exact_fields_past_the_limit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    let path_str = path.to_string_lossy().into_owned();
    mmc(&["generate", "--kind", "random:30", "-o", &path_str]);

    let output = mmc(&["report", &path_str]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["alpha_profile"]["skipped"], "TooLargeForExact");
    assert_eq!(report["expansion"][0]["exp_gromov"]["skipped"], "TooLargeForExact");
    // The witness lower bound survives without exact machinery.
    assert!(report["obsdiam"]["lower"].as_f64().unwrap() >= 0.0);
}

#[test]
fn check_passes_cycle_and_fails_under_injection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.json");
    let path_str = path.to_string_lossy().into_owned();
    mmc(&["generate", "--kind", "cycle:6", "-o", &path_str]);

    let ok = mmc(&["check", &path_str, "--kappa", "0.5"]);
    assert_eq!(ok.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert!(reports.as_array().unwrap().len() > 10);

    let bad = mmc(&["check", &path_str, "--kappa", "0.5", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn identical_config_gives_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.json");
    let path_str = path.to_string_lossy().into_owned();
    mmc(&["generate", "--kind", "random:7", "--seed", "9", "-o", &path_str]);

    let args = ["report", &path_str, "--seed", "3", "--kappa", "0.2", "--threads", "4"];
    let first = mmc(&args);
    let second = mmc(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let args = ["check", &path_str, "--seed", "3"];
    let first = mmc(&args);
    let second = mmc(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn csv_export_round_trips_at_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("random.json");
    let path_str = path.to_string_lossy().into_owned();
    mmc(&["generate", "--kind", "random:6", "--seed", "4", "-o", &path_str]);

    let json_out = mmc(&["report", &path_str]);
    let report: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let radii: Vec<f64> = report["alpha_profile"]["radii"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let values: Vec<f64> = report["alpha_profile"]["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();

    let csv_out = mmc(&["report", &path_str, "--format", "csv"]);
    assert_eq!(csv_out.status.code(), Some(0));
    let csv = String::from_utf8(csv_out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,alpha,witness_mask_hex"));
    for ((line, r), alpha) in lines.zip(&radii).zip(&values) {
        let fields: Vec<&str> = line.split(',').collect();
        let r_parsed: f64 = fields[0].parse().unwrap();
        let alpha_parsed: f64 = fields[1].parse().unwrap();
        assert_eq!(r_parsed.to_bits(), r.to_bits(), "radius precision lost");
        assert_eq!(alpha_parsed.to_bits(), alpha.to_bits(), "alpha precision lost");
    }
}

#[test]
fn config_file_provides_defaults_but_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "cycle.json", TWO_POINT);
    let config = write(dir.path(), "run.conf", "kappa = 0.5\nseed = 11\n");

    let from_file = mmc(&["report", &space, "--config", &config]);
    let report: serde_json::Value = serde_json::from_slice(&from_file.stdout).unwrap();
    assert_eq!(report["obsdiam"]["kappa"], 0.5);

    let overridden = mmc(&["report", &space, "--config", &config, "--kappa", "0.3"]);
    let report: serde_json::Value = serde_json::from_slice(&overridden.stdout).unwrap();
    assert_eq!(report["obsdiam"]["kappa"], 0.3);

    let bad = write(dir.path(), "bad.conf", "kappa 0.5\n");
    assert_eq!(mmc(&["report", &space, "--config", &bad]).status.code(), Some(2));
}

#[test]
fn sweep_summarizes_and_exits_zero() {
    let output = mmc(&["sweep", "--count", "8", "--n-min", "4", "--n-max", "6"]);
    assert_eq!(output.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["failures"].as_array().unwrap().len(), 0);
    assert!(summary["checks_passed"].as_u64().unwrap() > 0);
}

#[test]
fn witness_companion_document() {
    let dir = tempfile::tempdir().unwrap();
    let space = write(dir.path(), "two.json", TWO_POINT);
    let witness = dir.path().join("witness.json");
    let witness_str = witness.to_string_lossy().into_owned();
    let output = mmc(&["report", &space, "--witness-out", &witness_str, "-o", "/dev/null"]);
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(doc["f"].as_array().unwrap().len(), 2);
    assert!(doc["lip"].as_f64().unwrap() <= 1.0 + 1e-12);
}

#[test]
fn spectral_report_on_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle8.json");
    let path_str = path.to_string_lossy().into_owned();
    mmc(&["generate", "--kind", "cycle:8", "-o", &path_str]);

    let output = mmc(&["report", &path_str, "--graph", "unit"]);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let lambda1 = report["lambda1"]["lambda1"].as_f64().unwrap();
    let expected = 2.0 * (1.0 - (2.0 * std::f64::consts::PI / 8.0).cos());
    assert!((lambda1 - expected).abs() < 1e-8);
}
