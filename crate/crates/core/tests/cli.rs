use std::path::Path;
use std::process::Command;

use viscotube::cli::run_with_output;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["viscotube"];
    full.extend_from_slice(args);
    let code = run_with_output(full, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

fn binary() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_viscotube"));
    cmd.env_remove("VISCOTUBE_CONFIG");
    cmd
}

#[test]
fn zeros_command() {
    let (code, out) = run(&["zeros", "--family", "j0", "--count", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,zero\n1,2.404825557695773\n");
    let (_, out) = run(&["zeros", "--family", "j2", "--count", "3"]);
    assert_eq!(out.lines().count(), 4);
    assert!(out.lines().nth(1).unwrap().starts_with("1,5.13562230184068"));
}

#[test]
fn kernel_command_single_point() {
    let (code, out) = run(&["kernel", "--which", "phi", "--t", "1"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let value: f64 = row[1].parse().unwrap();
    assert!((value - 0.0123156).abs() < 1e-6);
    let tail: f64 = row[2].parse().unwrap();
    assert!(tail <= 1e-10);
}

#[test]
fn kernel_command_grid_and_fixed_terms() {
    let (_, out) = run(&["--terms", "5", "--t-min", "0.1", "--t-max", "10", "--points", "3", "--log", "kernel", "--which", "g"]);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0], "1");
    assert!(rows.iter().all(|r| r[3] == "5"));
}

#[test]
fn womersley_command() {
    let (code, out) = run(&["womersley", "--omega", "1000000"]);
    assert_eq!(code, 0);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[4] / 2e-3 - 1.0).abs() < 0.02);
    assert_eq!(row[1], 1000.0);
}

#[test]
fn womersley_history_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grad.csv");
    let mut text = String::from("t,lambda\n");
    for k in 0..=600 {
        text.push_str(&format!("{},{}\n", k as f64 * 0.02, 2.0));
    }
    std::fs::write(&path, text).unwrap();
    let (code, out) = run(&["womersley", "--history", path.to_str().unwrap(), "--rho", "2"]);
    assert_eq!(code, 0);
    let last: Vec<f64> = out.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((last[0] - 12.0).abs() < 1e-9);
    assert!((last[1] - 1.0).abs() < 1e-3);
}

#[test]
fn wave_command_writes_field() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let (code, out) = run(&[
        "--out", out_dir, "wave", "--input", "gaussian", "--stations", "4", "--steps", "20", "--dt", "0.01", "--dx", "0.05",
    ]);
    assert_eq!(code, 0);
    assert!(out.trim().ends_with("wave.csv"));
    let csv = std::fs::read_to_string(dir.path().join("wave.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,t,Y"));
    assert_eq!(csv.lines().count(), 1 + 4 * 20);
    assert!(csv.lines().nth(21).unwrap().starts_with("0.05,0,"));
}

#[test]
fn wave_oracle_rejects_unstable_step() {
    let err = run_with_output(
        ["viscotube", "wave", "--oracle", "--dt", "0.1", "--dx", "0.03", "--stations", "10", "--steps", "10"],
        &mut Vec::new(),
    );
    assert!(matches!(err, Err(viscotube::Error::Config(_))));
}

#[test]
fn figures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        let (code, _) = run(&["--out", dir.to_str().unwrap(), "figures"]);
        assert_eq!(code, 0);
    }
    for name in ["fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let fig3 = std::fs::read_to_string(a.path().join("fig3.csv")).unwrap();
    assert_eq!(fig3.lines().nth(1), Some("0,1"));
    let fig1 = std::fs::read_to_string(a.path().join("fig1.csv")).unwrap();
    let first: Vec<f64> = fig1.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 1e-3);
    assert!((first[1] / 35.68 - 1.0).abs() < 0.03);
}

#[test]
fn figures_to_unwritable_path_fail() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("sub");
    let res = run_with_output(["viscotube", "--out", target.to_str().unwrap(), "figures"], &mut Vec::new());
    assert!(matches!(res, Err(viscotube::Error::Io(_))));
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tau = 2\n");
    let (_, from_file) = run(&["--config", &cfg, "kernel", "--which", "psi", "--t", "100"]);
    let v: f64 = from_file.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 4.0).abs() < 1e-12);
    let (_, overridden) = run(&["--config", &cfg, "--tau", "4", "kernel", "--which", "psi", "--t", "100"]);
    let v: f64 = overridden.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 2.0).abs() < 1e-12);
}

#[test]
fn inconsistent_initial_values_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "g0 = 2\nj0 = 2\n");
    let res = run_with_output(["viscotube", "--config", &cfg, "zeros"], &mut Vec::new());
    assert!(matches!(res, Err(viscotube::Error::Config(_))));
}

#[test]
fn config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tau = 0.5\n");
    let out = binary()
        .env("VISCOTUBE_CONFIG", &cfg)
        .args(["kernel", "--which", "psi", "--t", "100"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 16.0).abs() < 1e-12);
}

#[test]
fn validate_exit_code_and_report() {
    let out = binary().arg("validate").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,measured,tolerance,status"));
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4, "{line}");
        assert_eq!(fields[3], "pass", "{line}");
    }
    assert!(text.contains("laplace.reciprocity"));
}

#[test]
fn errors_exit_with_status_two() {
    let out = binary().args(["kernel", "--t", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("t = 0"));
    let out = binary().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
