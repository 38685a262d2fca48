use std::path::Path;
use std::process::{Command, Output};

fn krydim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krydim")).args(args).current_dir(dir).env("KRYDIM_WORKERS", "1").output().unwrap()
}

fn write_signal_data(dir: &Path) {
    std::fs::write(dir.join("signal.cfg"), "p = 40\nn = 400\nlambdas = 12, 8, 5\nsigma = 1\nseed = 3\n").unwrap();
    let out = krydim(&["generate", "signal", "signal.cfg", "--out", "x.mtx"], dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn estimate_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    write_signal_data(dir.path());
    let out = krydim(&["estimate", "x.mtx", "--sigma", "1", "--out", "run"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["q_hat"], 3);
    for name in ["result.json", "ic_trace.csv", "ritz_values.csv", "subspace.mtx"] {
        assert!(dir.path().join("run").join(name).is_file(), "{name} missing");
    }
    let trace = std::fs::read_to_string(dir.path().join("run/ic_trace.csv")).unwrap();
    assert!(trace.starts_with("k,ic,theta_k\n0,"));
}

#[test]
fn invalid_parameters_exit_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    write_signal_data(dir.path());
    assert_eq!(krydim(&["estimate", "x.mtx", "--sigma", "-1"], dir.path()).status.code(), Some(1));
    assert_eq!(krydim(&["estimate", "x.mtx", "--sigma", "1", "--epsilon", "2"], dir.path()).status.code(), Some(1));
    assert_eq!(krydim(&["estimate", "x.mtx"], dir.path()).status.code(), Some(1));
    assert_eq!(krydim(&["bogus"], dir.path()).status.code(), Some(1));
}

#[test]
fn data_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = krydim(&["estimate", "nope.mtx", "--sigma", "1"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.mtx"));
    std::fs::write(dir.path().join("bad.mtx"), "not a matrix\n").unwrap();
    assert_eq!(krydim(&["estimate", "bad.mtx", "--sigma", "1"], dir.path()).status.code(), Some(2));
}

#[test]
fn conditions_reports_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["conditions", "--p", "200", "--n", "400", "--q", "5", "--sigma", "1"];
    let text = krydim(&args, dir.path());
    assert_eq!(text.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&text.stdout).contains("2.7046"));
    let mut json_args = args.to_vec();
    json_args.push("--json");
    let json: serde_json::Value = serde_json::from_slice(&krydim(&json_args, dir.path()).stdout).unwrap();
    assert!((json["overest_threshold"].as_f64().unwrap() - 2.7046).abs() < 1e-4);
    assert_eq!(
        krydim(&["conditions", "--p", "5", "--n", "10", "--q", "5", "--sigma", "1"], dir.path()).status.code(),
        Some(2)
    );
}

#[test]
fn invalid_worker_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_krydim"))
        .args(["conditions", "--p", "20", "--n", "40", "--q", "2", "--sigma", "1"])
        .env("KRYDIM_WORKERS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
