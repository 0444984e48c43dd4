//! Black-box tests of the compiled binary: flag handling, exit codes, file
//! and stdout plumbing.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fftduty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fftduty"))
        .args(args)
        .output()
        .expect("binary launches")
}

fn assert_code(output: &Output, expected: i32) {
    assert_eq!(
        output.status.code(),
        Some(expected),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

/// Writes a default synthetic log into `dir` and returns its path as a
/// string.
fn synth_fixture(dir: &Path) -> String {
    let path = dir.join("synth.csv");
    let out = fftduty(&["synth", "--out", path.to_str().unwrap()]);
    assert_code(&out, 0);
    path.to_str().unwrap().to_string()
}

#[test]
fn help_is_a_success() {
    let out = fftduty(&["--help"]);
    assert_code(&out, 0);
    let text = stdout_of(&out);
    for command in ["synth", "compress", "schedule", "verify"] {
        assert!(text.contains(command), "help misses {command}:\n{text}");
    }
}

#[test]
fn unknown_flags_are_usage_errors() {
    let out = fftduty(&["compress", "--input", "x.csv", "--frobnicate"]);
    assert_code(&out, 1);
    assert!(out.stdout.is_empty(), "usage errors keep stdout clean");
}

#[test]
fn synth_emits_a_header_and_97_rows() {
    let out = fftduty(&["synth"]);
    assert_code(&out, 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("timestamp,co2_ppm"));
    assert_eq!(text.lines().count(), 98);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("86400,"), "last row: {last}");
}

#[test]
fn synth_rejects_a_zero_interval() {
    let out = fftduty(&["synth", "--interval-min", "0"]);
    assert_code(&out, 1);
}

#[test]
fn synth_is_deterministic_per_seed() {
    let a = fftduty(&["synth", "--seed", "7"]);
    let b = fftduty(&["synth", "--seed", "7"]);
    let c = fftduty(&["synth", "--seed", "8"]);
    assert_code(&a, 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn synth_out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("log.csv");
    let to_file = fftduty(&["synth", "--out", path.to_str().unwrap()]);
    assert_code(&to_file, 0);
    assert!(to_file.stdout.is_empty());
    let to_stdout = fftduty(&["synth"]);
    assert_eq!(fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn compress_missing_input_is_a_data_error() {
    let out = fftduty(&["compress", "--input", "/nonexistent/log.csv"]);
    assert_code(&out, 2);
}

#[test]
fn compress_rejects_out_of_range_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    for bad in ["1.5", "0", "-0.25"] {
        let out = fftduty(&["compress", "--input", &input, "--threshold", bad]);
        assert_code(&out, 1);
    }
}

#[test]
fn compress_rejects_a_channel_absent_from_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let out = fftduty(&["compress", "--input", &input, "--channel", "temperature_c"]);
    assert_code(&out, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("temperature_c"));
}

#[test]
fn compress_reports_metrics_and_writes_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let reconstruction = dir.path().join("reconstruction.csv");
    let spectrum = dir.path().join("spectrum.json");
    let out = fftduty(&[
        "compress",
        "--input",
        &input,
        "--verify",
        "--reconstruction",
        reconstruction.to_str().unwrap(),
        "--spectrum-out",
        spectrum.to_str().unwrap(),
    ]);
    assert_code(&out, 0);

    let result: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(result["n"], 97);
    assert_eq!(result["channel"], "co2_ppm");
    assert_eq!(result["interval_s"], 900);
    assert!(result["selection"]["energy_fraction"].as_f64().unwrap() >= 0.5);
    assert!(result["metrics"]["retained_unit_count"].as_u64().unwrap() >= 1);
    assert_eq!(
        result["schedule"]["activations"][0]["index"].as_u64(),
        Some(0)
    );

    let rec_text = fs::read_to_string(&reconstruction).unwrap();
    assert!(rec_text.starts_with("timestamp,original,reconstructed\n"));
    assert_eq!(rec_text.lines().count(), 98);

    let spec_text = fs::read_to_string(&spectrum).unwrap();
    let spec: serde_json::Value = serde_json::from_str(&spec_text).unwrap();
    assert_eq!(spec["n"], 97);
    assert_eq!(spec["coefficients"].as_array().unwrap().len(), 97);
}

#[test]
fn compress_out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let result = dir.path().join("result.json");
    let to_file = fftduty(&["compress", "--input", &input, "--out", result.to_str().unwrap()]);
    assert_code(&to_file, 0);
    let to_stdout = fftduty(&["compress", "--input", &input]);
    assert_code(&to_stdout, 0);
    assert_eq!(fs::read(&result).unwrap(), to_stdout.stdout);
}

#[test]
fn schedule_for_a_constant_log_is_the_baseline_wakeup() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let mut csv = String::from("timestamp,co2_ppm\n");
    for i in 0..10 {
        csv.push_str(&format!("{},500\n", i * 900));
    }
    fs::write(&path, csv).unwrap();

    let out = fftduty(&["schedule", "--input", path.to_str().unwrap()]);
    assert_code(&out, 0);
    let schedule: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let activations = schedule["activations"].as_array().unwrap();
    assert_eq!(activations.len(), 1);
    assert_eq!(activations[0]["index"], 0);
    assert_eq!(activations[0]["timestamp"], 0);
    assert_eq!(schedule["interval_s"], 900);
}

#[test]
fn schedule_rejects_a_negative_k_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let out = fftduty(&["schedule", "--input", &input, "--k-sigma", "-1"]);
    assert_code(&out, 1);
}

#[test]
fn an_explicit_grid_interval_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let out = fftduty(&["compress", "--input", &input, "--interval-s", "450"]);
    assert_code(&out, 0);
    let result: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(result["n"], 193);
    assert_eq!(result["interval_s"], 450);

    let bad = fftduty(&["compress", "--input", &input, "--interval-s", "-900"]);
    assert_code(&bad, 1);
}

#[test]
fn verify_passes_on_generated_data() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let out = fftduty(&["verify", "--input", &input]);
    assert_code(&out, 0);
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 3);
    for check in ["oracle equivalence", "round trip", "parseval"] {
        assert!(
            text.lines().any(|l| l.starts_with(check) && l.contains("PASS")),
            "missing PASS line for {check}:\n{text}"
        );
    }
}

#[test]
fn verify_cross_validates_a_stored_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());
    let spectrum = dir.path().join("spectrum.json");
    let compress = fftduty(&[
        "compress",
        "--input",
        &input,
        "--out",
        dir.path().join("result.json").to_str().unwrap(),
        "--spectrum-out",
        spectrum.to_str().unwrap(),
    ]);
    assert_code(&compress, 0);

    let honest = fftduty(&[
        "verify",
        "--input",
        &input,
        "--spectrum",
        spectrum.to_str().unwrap(),
    ]);
    assert_code(&honest, 0);
    let text = stdout_of(&honest);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("stored spectrum: PASS"), "{text}");

    // Corrupt one coefficient and the same check must fail with exit 3.
    let mut doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&spectrum).unwrap()).unwrap();
    let re = doc["coefficients"][5][0].as_f64().unwrap();
    doc["coefficients"][5][0] = serde_json::json!(re + 1.0);
    let tampered = dir.path().join("tampered.json");
    fs::write(&tampered, serde_json::to_string(&doc).unwrap()).unwrap();

    let caught = fftduty(&[
        "verify",
        "--input",
        &input,
        "--spectrum",
        tampered.to_str().unwrap(),
    ]);
    assert_code(&caught, 3);
    assert!(stdout_of(&caught).contains("stored spectrum: FAIL"));
}

#[test]
fn verify_rejects_a_spectrum_from_a_different_grid() {
    let dir = tempfile::tempdir().unwrap();
    let input = synth_fixture(dir.path());

    let other_log = dir.path().join("short.csv");
    let spectrum = dir.path().join("short_spectrum.json");
    assert_code(
        &fftduty(&["synth", "--hours", "12", "--out", other_log.to_str().unwrap()]),
        0,
    );
    assert_code(
        &fftduty(&[
            "compress",
            "--input",
            other_log.to_str().unwrap(),
            "--out",
            dir.path().join("r.json").to_str().unwrap(),
            "--spectrum-out",
            spectrum.to_str().unwrap(),
        ]),
        0,
    );

    let out = fftduty(&[
        "verify",
        "--input",
        &input,
        "--spectrum",
        spectrum.to_str().unwrap(),
    ]);
    assert_code(&out, 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not match"));
}

#[test]
fn malformed_rows_report_their_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.csv");
    fs::write(&path, "timestamp,co2_ppm\n0,400\nnot-a-time,410\n").unwrap();
    let out = fftduty(&["compress", "--input", path.to_str().unwrap()]);
    assert_code(&out, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
