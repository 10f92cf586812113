use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixtime"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn spectrum_dephasing_qubit() {
    let cfg = config("dephasing.json");
    let doc = json(&run(&["spectrum", cfg.to_str().unwrap()]));
    assert_eq!(doc["report"]["summary"]["steady_dim"], 2);
    assert_eq!(doc["manifest"]["subcommand"], "spectrum");
    assert_eq!(doc["manifest"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn mix_amplitude_damping() {
    let cfg = config("amp_damp.json");
    let doc = json(&run(&["mix", cfg.to_str().unwrap(), "--eta", "0.01"]));
    let r = &doc["report"];
    assert!((r["gap"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let measured = r["tau_measured"].as_f64().unwrap();
    let predicted = r["tau_predicted"].as_f64().unwrap();
    assert!((measured - predicted).abs() / predicted < 0.01, "{measured} vs {predicted}");
    assert!(measured <= r["tau_bound"].as_f64().unwrap() * 1.01);
}

#[test]
fn missing_config_exits_2() {
    let out = run(&["spectrum", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/definitely/not/here.json"));
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["spectrum", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_argument_exits_2() {
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn strong_perturbation_rejects_bulk_dissipation() {
    let cfg = config("bulk_ladder.json");
    let out = run(&["perturb", cfg.to_str().unwrap(), "--regime", "strong"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn csv_header_and_out_dir() {
    let cfg = config("dephasing.json");
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "spectrum",
        cfg.to_str().unwrap(),
        "--format",
        "csv",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# mixtime-csv v1 subcommand=spectrum config_sha256="));
    assert_eq!(lines.next().unwrap(), "j,alpha_j,beta_j,trace_norm,is_steady");
    assert_eq!(lines.count(), 4);
    let written = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(written, stdout);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert!(header.ends_with(doc["manifest"]["config_sha256"].as_str().unwrap()));
}

#[test]
fn perturb_weak_reports_cutoffs() {
    let cfg = config("tfi_weak.json");
    let doc = json(&run(&["perturb", cfg.to_str().unwrap(), "--regime", "weak", "--cutoff", "0.01,0.001"]));
    let text = doc["report"].to_string();
    assert!(text.contains("norm_A_bound"));
    assert!(text.contains("first_order_rate"));
}

#[test]
fn sparsity_rejects_alpha_below_one() {
    let cfg = config("ising_zz_x.json");
    let out = run(&["sparsity", cfg.to_str().unwrap(), "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn scan_is_deterministic() {
    let cfg = config("tfi_boundary.json");
    let args = ["scan", cfg.to_str().unwrap(), "--l-min", "2", "--l-max", "3", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
}
