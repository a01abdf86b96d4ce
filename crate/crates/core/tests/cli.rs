use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ratlyap::cli::RunManifest;
use ratlyap::verify::Certificate;

fn ratlyap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratlyap"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn certify_quintic(dir: &Path) -> PathBuf {
    let out = ratlyap(
        dir,
        &["certify", "--family", "quintic", "--theta", "0.05", "--out", "rep.json", "--certificate-out", "cert.json"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    dir.join("cert.json")
}

#[test]
fn verify_round_trip_and_mutations() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = certify_quintic(dir.path());
    let quintic = ["--family", "quintic", "--theta", "0.05"];

    let args = [&["verify", "--certificate", "cert.json"][..], &quintic].concat();
    assert_eq!(code(&ratlyap(dir.path(), &args)), 0);
    let args = [&["verify", "--certificate", "rep.json"][..], &quintic].concat();
    assert_eq!(code(&ratlyap(dir.path(), &args)), 0);

    let mut cert: Certificate = serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    cert.p.set(0, 1, cert.p.get(0, 1) + 10.0);
    std::fs::write(dir.path().join("bad.json"), serde_json::to_string(&cert).unwrap()).unwrap();
    let args = [&["verify", "--certificate", "bad.json"][..], &quintic].concat();
    assert_eq!(code(&ratlyap(dir.path(), &args)), 5);

    let out = ratlyap(dir.path(), &["verify", "--certificate", "cert.json", "--family", "quintic", "--theta", "1.0"]);
    assert_eq!(code(&out), 5);
    let out = ratlyap(dir.path(), &["verify", "--certificate", "missing.json", "--family", "quintic"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ratlyap(d, &["certify", "--family", "linear", "--matrix", "-1,1;0,-1", "--out", "lin.json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("lin.json")).unwrap()).unwrap();
    assert_eq!(report["certificate"]["shape"]["s"], 2);
    assert_eq!(report["certificate"]["shape"]["r"], 0);

    assert_eq!(code(&ratlyap(d, &["certify", "--family", "nonhomog"])), 3);
    std::fs::write(d.join("even.txt"), "-x1^2\n-x2^2\n").unwrap();
    assert_eq!(code(&ratlyap(d, &["certify", "--input", "even.txt"])), 3);
    std::fs::write(d.join("junk.txt"), "-x1^^2\n").unwrap();
    assert_eq!(code(&ratlyap(d, &["certify", "--input", "junk.txt"])), 1);
    assert_eq!(code(&ratlyap(d, &["certify", "--family", "quintic", "--s-max", "5"])), 1);
    assert_eq!(code(&ratlyap(d, &["certify", "--family", "linear"])), 1);

    let out = Command::new(env!("CARGO_BIN_EXE_ratlyap"))
        .current_dir(d)
        .env("RATLYAP_LEVEL_TIME_LIMIT", "1e-9")
        .args(["certify", "--family", "quintic", "--out", "abort.json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 4);
}

#[test]
fn file_input_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("f.txt"), "# f = -x + y, -y\n-x1 + x2\n-x2\n").unwrap();
    let out = ratlyap(d, &["certify", "--input", "f.txt", "--out", "f.json"]);
    assert_eq!(code(&out), 0);
    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(d.join("f.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.command, "certify");
    assert_eq!(manifest.input_sha256, ratlyap::cli::sha256_hex(&std::fs::read(d.join("f.txt")).unwrap()));
    assert_eq!(manifest.outputs.len(), 1);
    assert_eq!(
        manifest.outputs[0].sha256,
        ratlyap::cli::sha256_hex(&std::fs::read(d.join("f.json")).unwrap())
    );
}

#[test]
fn simulate_quintic_with_w_column() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ratlyap(
        d,
        &[
            "simulate", "--family", "quintic", "--theta", "0.05", "--x0", "1,0.2", "--horizon", "40",
            "--lyapunov", "builtin:quintic-W", "--out", "traj.csv", "--levelsets", "levels.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(d.join("traj.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x1,x2,V"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|t| t.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 40_001);
    assert!(rows.windows(2).all(|w| w[1][3] <= w[0][3] + 1e-12));
    let last = rows.last().unwrap();
    assert!((last[0] - 40.0).abs() < 1e-9);
    assert!(last[1].hypot(last[2]) < 1.0f64.hypot(0.2));

    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(d.join("traj.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.details["x0"], serde_json::json!([1.0, 0.2]));
    assert_eq!(manifest.outputs.len(), 2);
    assert!(std::fs::read_to_string(d.join("levels.csv")).unwrap().starts_with("level,c,phi,x1,x2"));
}

#[test]
fn simulate_nonhomog_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let horizon = 2f64.ln().to_string();
    let out = ratlyap(
        dir.path(),
        &["simulate", "--family", "nonhomog", "--x0", "2,3", "--step", "1e-4", "--horizon", &horizon],
    );
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert!((last[1] - 1.5f64.exp()).abs() < 1e-4);
    assert!((last[2] - 1.5).abs() < 1e-4);
    assert!(dir.path().join("ratlyap-simulate.manifest.json").exists());
}

#[test]
fn bench_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = ratlyap(dir.path(), &["bench", "--linear-count", "2", "--out", "bench.json"]);
    assert_eq!(code(&out), 0);
    let rows: Vec<ratlyap::cli::BenchRow> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("bench.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 4 + 3 + 3);
    for r in rows.iter().filter(|r| r.name.starts_with("linear")) {
        assert_eq!(r.rational, Some((2, 0)));
    }
    let q005 = rows.iter().find(|r| r.name == "quintic theta=0.05").unwrap();
    assert_eq!(q005.rational, Some((4, 1)));
    assert_eq!(q005.polynomial_only, Some(8));
    let q15 = rows.iter().find(|r| r.name == "quintic theta=1.5").unwrap();
    assert!(q15.rational.unwrap() <= (4, 1));
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.contains("quintic theta=0.05"));
}

#[test]
fn reruns_reproduce_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["a.json", "b.json"] {
        assert_eq!(code(&ratlyap(d, &["certify", "--family", "quintic", "--theta", "0.5", "--out", name])), 0);
    }
    let load = |p: &str| -> serde_json::Value { serde_json::from_slice(&std::fs::read(d.join(p)).unwrap()).unwrap() };
    let statuses = |v: &serde_json::Value| -> Vec<serde_json::Value> {
        v["levels"].as_array().unwrap().iter().map(|l| l["status"].clone()).collect()
    };
    assert_eq!(statuses(&load("a.json")), statuses(&load("b.json")));
}
