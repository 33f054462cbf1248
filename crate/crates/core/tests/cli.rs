use std::fs;
use std::process::Command;

use pancake::cli::{parse_config, CommandKind};
use pancake::harness::default_stride;

#[test]
fn run_with_defaults() {
    let c = parse_config(["run", "--n", "2", "--R", "10"], None).unwrap();
    assert_eq!(c.command, CommandKind::Run);
    assert_eq!((c.n, c.oval_age), (2, 10.0));
    assert_eq!(c.solver.grid_size, 512);
    assert_eq!(c.solver.safety, 0.25);
    let stride = c.solver.snapshot_stride;
    assert_eq!(stride, default_stride(10.0));
    // T ≤ R + log 2 keeps the stride snapshots under 2000
    assert!((10.0 + std::f64::consts::LN_2) / stride < 2000.0);
}

#[test]
fn grid_not_divisible_by_four_is_rejected() {
    let err = parse_config(["run", "--N", "102"], None).unwrap_err();
    assert!(err.to_string().contains("divisible by 4"), "{err}");
}

#[test]
fn flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pancake.toml");
    fs::write(&path, "R = 20.0\nn = 3\nN = 256\n").unwrap();
    let c = parse_config(["run", "--R", "40"], Some(&path)).unwrap();
    assert_eq!(c.oval_age, 40.0);
    assert_eq!(c.n, 3);
    assert_eq!(c.solver.grid_size, 256);

    let flag = path.to_str().unwrap();
    let c = parse_config(["verify", "--config", flag, "--N", "128"], None).unwrap();
    assert_eq!(c.oval_age, 20.0);
    assert_eq!(c.solver.grid_size, 128);
}

#[test]
fn bad_file_values_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "N = 100\nbogus = 1\n").unwrap();
    assert!(parse_config(["run"], Some(&path)).is_err());
    fs::write(&path, "N = 98\n").unwrap();
    assert!(parse_config(["run"], Some(&path)).is_err());
    let missing = dir.path().join("missing.toml");
    let err = parse_config(["run"], Some(&missing)).unwrap_err();
    assert!(err.to_string().contains("missing.toml"), "{err}");
}

#[test]
fn unknown_flag_is_rejected() {
    assert!(parse_config(["run", "--resolution", "3"], None).is_err());
    assert!(parse_config(["explode"], None).is_err());
}

fn pancake() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pancake"))
}

#[test]
fn oval_subcommand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let status = pancake()
        .args(["oval", "--t", "-2", "--N", "32", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(dir.path().join("oval.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,kappa,x,y,residual"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 32);
    assert!(rows.iter().all(|r| r[4].abs() < 1e-12));
}

#[test]
fn verify_exit_status_and_env_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out = pancake()
        .args(["verify", "--n", "2", "--R", "3", "--N", "64"])
        .env("PANCAKE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let report = pancake::io::read_report(&dir.path().join("report.json")).unwrap();
    assert_eq!(report.summary.failed, 0);

    let bad = pancake().args(["run", "--N", "100", "--safety", "2"]).output().unwrap();
    assert!(!bad.status.success());
}

#[test]
fn verify_and_fit_read_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let run = pancake()
        .args(["run", "--n", "1", "--R", "4", "--N", "64", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(run.success());
    let record = dir.path().join("record.json");
    let fit = pancake().arg("fit").arg("--record").arg(&record).output().unwrap();
    assert!(fit.status.success());
    assert!(String::from_utf8_lossy(&fit.stdout).starts_with("C_est"));
    let verify = pancake()
        .arg("verify")
        .arg("--record")
        .arg(&record)
        .arg("--out")
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(verify.success());
}
