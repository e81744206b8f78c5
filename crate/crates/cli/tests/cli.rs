//! End-to-end tests of the `spinlab` binary: flag parsing, output schema,
//! exit codes, determinism, and the dimension cap.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .output()
        .expect("the binary should run")
}

fn spinlab_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("the binary should run")
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout should hold one JSON object")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("the process should exit normally")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("spinlab-test-{}-{name}", std::process::id()))
}

#[test]
fn moments_match_the_pinned_number_state_values() {
    let out = json_of(&spinlab(&[
        "moments", "--state", "fock:4:1", "--dir", "1,0,0",
    ]));
    let oracle = &out["outputs"]["matrix_oracle"];
    assert!((oracle["variance"].as_f64().unwrap() - 2.5).abs() < 1e-12);
    let closed = &out["outputs"]["closed_form"];
    assert!((closed["variance"].as_f64().unwrap() - 2.5).abs() < 1e-12);
    assert!(out["outputs"]["max_difference"].as_f64().unwrap() < 1e-12);
    assert_eq!(out["inputs"]["state"]["kind"], "fock");
    assert_eq!(out["inputs"]["n"], 4);

    let out = json_of(&spinlab(&[
        "moments", "--state", "fock:4:1", "--dir", "0,0,1",
    ]));
    assert!(out["outputs"]["matrix_oracle"]["variance"]
        .as_f64()
        .unwrap()
        .abs()
        < 1e-12);
}

#[test]
fn malformed_flags_exit_with_usage_errors() {
    let out = spinlab(&["moments", "--state", "fock:4:1", "--dir", "1,0"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("--dir"));

    // The state flags form a required, mutually exclusive pair.
    let out = spinlab(&["moments", "--dir", "1,0,0"]);
    assert_eq!(exit_code(&out), 2);
    let out = spinlab(&[
        "moments", "--state", "fock:4:1", "--state-file", "/nonexistent", "--dir", "1,0,0",
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = spinlab(&["moments", "--state", "blob:4:1"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("fock"));

    // Parse errors carry a column.
    let out = spinlab(&["moments", "--state", "fock:4:x"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("column"));

    let out = spinlab(&["moments", "--state", "fock:4:9"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn squeeze_reports_detection_and_the_undefined_marker() {
    let out = json_of(&spinlab(&[
        "squeeze", "--state", "fock:4:2", "--triplet", "auto-z",
    ]));
    let toth = &out["outputs"]["toth"];
    assert!((toth["lhs3"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert_eq!(toth["satisfied3"], Value::Bool(false));
    // Along the population axis the mean spin vanishes at half filling,
    // so both squeezing denominators collapse.
    assert_eq!(out["outputs"]["xi"]["xi_w_squared"], "undefined");
    assert_eq!(out["outputs"]["xi"]["xi_s_squared"], "undefined");

    let out = json_of(&spinlab(&[
        "squeeze", "--state", "fock:4:2", "--triplet", "z,y,x",
    ]));
    assert_eq!(out["outputs"]["xi"]["xi_w_squared"], "undefined");

    let out = json_of(&spinlab(&[
        "squeeze", "--state", "gauss:4:2:0.3", "--triplet", "z,y,x",
    ]));
    let xi_w = out["outputs"]["xi"]["xi_w_squared"].as_f64().unwrap();
    assert!(
        (xi_w - 1.0 / 3.0).abs() < 1e-3,
        "xi_w_squared = {xi_w} should sit near 1/3"
    );
    assert_eq!(out["inputs"]["triplet"]["n3"], serde_json::json!([1.0, 0.0, 0.0]));
}

#[test]
fn qfi_reports_closed_and_spectral_routes() {
    let out = json_of(&spinlab(&["qfi", "--state", "fock:4:2", "--dir", "0,1,0"]));
    let closed = out["outputs"]["closed_form"]["value"].as_f64().unwrap();
    let spectral = out["outputs"]["spectral"]["value"].as_f64().unwrap();
    assert!((closed - 12.0).abs() < 1e-9);
    assert!((spectral - 12.0).abs() < 1e-8);

    let out = json_of(&spinlab(&["qfi", "--state", "fock:4:2", "--dir", "0,0,1"]));
    assert!(out["outputs"]["closed_form"]["value"].as_f64().unwrap() < 1e-12);
    assert!(out["outputs"]["spectral"]["value"].as_f64().unwrap() < 1e-10);

    let out = json_of(&spinlab(&[
        "qfi", "--state", "mixture:0.5,0.3,0.2", "--dir", "0,1,0",
    ]));
    let closed = out["outputs"]["closed_form"]["value"].as_f64().unwrap();
    let spectral = out["outputs"]["spectral"]["value"].as_f64().unwrap();
    assert!((closed - spectral).abs() <= 1e-8 * closed.abs().max(1.0));
}

#[test]
fn state_files_round_trip_and_bad_ones_are_rejected() {
    let good = temp_path("good.json");
    std::fs::write(&good, r#"{"v":1,"kind":"gauss","n":6,"l":3,"sigma":0.4}"#).unwrap();
    let out = json_of(&spinlab(&[
        "moments", "--state-file", good.to_str().unwrap(), "--dir", "1,0,0",
    ]));
    assert_eq!(out["inputs"]["n"], 6);
    assert_eq!(out["inputs"]["state"]["kind"], "gauss");

    let wrong_version = temp_path("v2.json");
    std::fs::write(&wrong_version, r#"{"v":2,"kind":"fock","n":4,"k":2}"#).unwrap();
    let out = spinlab(&["moments", "--state-file", wrong_version.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("version"));

    let malformed = temp_path("broken.json");
    std::fs::write(&malformed, "{\"v\":1,\n \"kind\": oops}").unwrap();
    let out = spinlab(&["moments", "--state-file", malformed.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("line 2"));

    for path in [good, wrong_version, malformed] {
        let _ = std::fs::remove_file(path);
    }
}

#[test]
fn scans_emit_csv_find_the_sign_change_and_honor_out() {
    let out_file = temp_path("scan.csv");
    let out = spinlab(&[
        "scan", "--param", "n3z2", "--from", "0.5", "--to", "0.9", "--step", "0.01",
        "--quantity", "squeeze", "--state", "fock:4:2",
        "--out", out_file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n3z2,lhs1,lhs2,lhs3,lhs4,xi_w_squared,xi_s_squared"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 41);

    // lhs3 changes sign exactly once, between 0.66 and 0.67 (the analytic
    // crossing for this state sits at 2/3).
    let mut crossings = Vec::new();
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (la, lb): (f64, f64) = (a[3].parse().unwrap(), b[3].parse().unwrap());
        if (la > 0.0) != (lb > 0.0) {
            crossings.push((a[0].parse::<f64>().unwrap(), b[0].parse::<f64>().unwrap()));
        }
    }
    assert_eq!(crossings.len(), 1);
    let (lo, hi) = crossings[0];
    assert!(lo < 2.0 / 3.0 && 2.0 / 3.0 < hi);
    assert!(hi - lo < 0.011);

    let written = std::fs::read(&out_file).unwrap();
    assert_eq!(written, out.stdout, "--out must duplicate stdout bytes");
    let _ = std::fs::remove_file(out_file);
}

#[test]
fn scan_templates_substitute_the_parameter() {
    let out = spinlab(&[
        "scan", "--param", "n", "--from", "4", "--to", "12", "--step", "4",
        "--quantity", "qfi", "--state", "fock:@:@/2", "--dir", "0,1,0",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,f_closed,f_spectral");
    for line in lines {
        let cells: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let n = cells[0];
        let expected = n + n * n / 2.0;
        assert!((cells[1] - expected).abs() <= 1e-10 * expected);
        assert!((cells[2] - expected).abs() <= 1e-8 * expected);
    }

    let out = spinlab(&[
        "scan", "--param", "sigma", "--from", "0.2", "--to", "0.4", "--step", "0.1",
        "--quantity", "squeeze", "--state", "gauss:4:2:@",
    ]);
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn degenerate_scan_requests_exit_with_usage_errors() {
    let empty = spinlab(&[
        "scan", "--param", "sigma", "--from", "1.0", "--to", "0.5", "--step", "0.1",
        "--quantity", "squeeze", "--state", "gauss:4:2:@",
    ]);
    assert_eq!(exit_code(&empty), 2);
    assert!(stderr_of(&empty).contains("empty range"));

    let bad_step = spinlab(&[
        "scan", "--param", "sigma", "--from", "0.1", "--to", "0.5", "--step", "0",
        "--quantity", "squeeze", "--state", "gauss:4:2:@",
    ]);
    assert_eq!(exit_code(&bad_step), 2);

    let bad_quantity = spinlab(&[
        "scan", "--param", "sigma", "--from", "0.1", "--to", "0.5", "--step", "0.1",
        "--quantity", "blob", "--state", "gauss:4:2:@",
    ]);
    assert_eq!(exit_code(&bad_quantity), 2);

    let bad_param = spinlab(&[
        "scan", "--param", "blob", "--from", "0.1", "--to", "0.5", "--step", "0.1",
        "--quantity", "squeeze", "--state", "gauss:4:2:@",
    ]);
    assert_eq!(exit_code(&bad_param), 2);

    let no_placeholder = spinlab(&[
        "scan", "--param", "sigma", "--from", "0.1", "--to", "0.5", "--step", "0.1",
        "--quantity", "squeeze", "--state", "gauss:4:2:0.3",
    ]);
    assert_eq!(exit_code(&no_placeholder), 2);
    assert!(stderr_of(&no_placeholder).contains('@'));

    // The frame-tilt parameter only makes sense for squeezing rows.
    let tilt_qfi = spinlab(&[
        "scan", "--param", "n3z2", "--from", "0.1", "--to", "0.5", "--step", "0.1",
        "--quantity", "qfi", "--state", "fock:4:2",
    ]);
    assert_eq!(exit_code(&tilt_qfi), 2);
}

#[test]
fn estimates_are_reproducible_and_echo_their_seed() {
    let args = [
        "estimate", "--state", "fock:6:3", "--rot-dir", "0,1,0",
        "--theta", "0.3", "--shots", "100", "--reps", "5", "--seed", "42",
    ];
    let first = spinlab(&args);
    let second = spinlab(&args);
    assert!(first.status.success(), "{}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout, "fixed seeds must reproduce bytes");

    let record = json_of(&first);
    assert_eq!(record["seed"], 42);
    assert_eq!(record["inputs"]["seed"], 42);
    assert_eq!(record["outputs"]["repetitions"], 5);

    // Omitting the seed draws one from entropy, echoes it, and replaying
    // with the echoed seed reproduces the run byte for byte.
    let entropy = spinlab(&[
        "estimate", "--state", "fock:6:3", "--theta", "0.3", "--shots", "100", "--reps", "2",
    ]);
    let record = json_of(&entropy);
    let seed = record["seed"].as_u64().unwrap().to_string();
    let replay = spinlab(&[
        "estimate", "--state", "fock:6:3", "--theta", "0.3", "--shots", "100", "--reps", "2",
        "--seed", &seed,
    ]);
    assert_eq!(entropy.stdout, replay.stdout);

    let zero_shots = spinlab(&[
        "estimate", "--state", "fock:6:3", "--theta", "0.3", "--shots", "0", "--reps", "2",
    ]);
    assert_eq!(exit_code(&zero_shots), 2);
}

#[test]
fn the_oracle_command_passes_and_rejects_oversize_requests() {
    let args = ["oracle", "--n", "4", "--trials", "50", "--seed", "11"];
    let first = spinlab(&args);
    let second = spinlab(&args);
    assert!(first.status.success(), "{}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout);
    let record = json_of(&first);
    assert_eq!(record["outputs"]["all_ok"], Value::Bool(true));
    assert_eq!(record["seed"], 11);

    let too_big = spinlab(&["oracle", "--n", "9"]);
    assert_eq!(exit_code(&too_big), 2);
    assert!(stderr_of(&too_big).contains("2..=8"));
}

#[test]
fn the_dimension_cap_is_configurable_by_environment() {
    let out = spinlab_env(
        &["moments", "--state", "fock:10:5", "--dir", "0,0,1"],
        "SPINLAB_MAX_N",
        "8",
    );
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_of(&out).contains("SPINLAB_MAX_N"));

    let out = spinlab_env(
        &["moments", "--state", "fock:10:5", "--dir", "0,0,1"],
        "SPINLAB_MAX_N",
        "not-a-number",
    );
    assert_eq!(exit_code(&out), 2);

    let out = spinlab_env(
        &["moments", "--state", "fock:10:5", "--dir", "0,0,1"],
        "SPINLAB_MAX_N",
        "16",
    );
    assert!(out.status.success());
}

#[test]
fn normalization_warnings_go_to_stderr_and_records_hold_canonical_values() {
    let out = spinlab(&["moments", "--state", "mixture:1,1,1,1", "--dir", "0,0,2"]);
    assert!(out.status.success());
    let err = stderr_of(&out);
    assert!(err.contains("unit norm"), "missing dir warning: {err}");
    assert!(err.contains("unit sum"), "missing mixture warning: {err}");
    let record: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        record["inputs"]["state"]["probs"],
        serde_json::json!([0.25, 0.25, 0.25, 0.25])
    );
    assert_eq!(record["inputs"]["dir"], serde_json::json!([0.0, 0.0, 1.0]));
}
