use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;
use sphere_hecke::hecke::{HeckeSpace, SumMode};
use sphere_hecke::theta::lift;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sphere-hecke"));
    c.env_remove("SPHERE_HECKE_OUT");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn class_minus_20() {
    let o = run(&["class", "-D", "-20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("h=2, c_D=1, Gauss OK"), "{}", stderr(&o));
    let v = stdout_json(&o);
    let r = &v["records"][0];
    assert_eq!(r["h_D"], 2);
    assert_eq!(r["c_D"], 1);
    assert_eq!(r["gauss"]["holds"], true);
    assert_eq!(r["family"]["orbits"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_minus_8_to_60() {
    let o = run(&["sweep", "-D", "-8", "--lmax", "60"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = stdout_json(&o);
    let rec = &v["records"][0];
    assert!(rec["rows"].as_array().unwrap().len() >= 40);
    assert!(rec["slope"].as_f64().unwrap() <= 0.5);
}

#[test]
fn quick_verify_under_a_minute() {
    let t = Instant::now();
    let o = run(&["verify", "--quick"]);
    assert!(t.elapsed().as_secs() < 60);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["ok"], true);
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["pass"] == true));
    let lines = stderr(&o).lines().filter(|l| l.starts_with("PASS")).count();
    assert_eq!(lines, v["records"].as_array().unwrap().len());
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["eigen", "--lmin", "9", "--lmax", "14"][..],
        &["restrict", "-D", "-20", "--lmax", "12"],
        &["verify", "--quick"],
    ] {
        let mut outs = Vec::new();
        for k in 0..2 {
            let p = dir.path().join(format!("{}{k}.json", args[0]));
            let mut a = args.to_vec();
            let ps = p.to_str().unwrap().to_string();
            a.extend(["--out", &ps]);
            assert!(run(&a).status.success());
            outs.push(std::fs::read(&p).unwrap());
        }
        assert_eq!(outs[0], outs[1], "{}", args[0]);
    }
    // thread count does not change the bytes
    let a = run(&["sweep", "--lmin", "3", "--lmax", "25", "--threads", "1"]);
    let b = run(&["sweep", "--lmin", "3", "--lmax", "25", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn floats_round_trip_exactly() {
    let o = run(&["theta", "--lmin", "4", "--lmax", "4", "-M", "12"]);
    let v = stdout_json(&o);
    let got: Vec<f64> = v["records"][0]["qexp"]["a"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    let psi = HeckeSpace::new(4).joint_eigenbasis(SumMode::Full, &[3]).unwrap()[0].function();
    let want = lift(&psi, 12).unwrap().a;
    assert_eq!(got, want);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"a\": [1.0000000000000000e0") || text.contains("\"a\": [9.9999999999999"));
}

#[test]
fn exit_status_follows_checks() {
    let o = run(&["verify", "--quick", "--tol-partition", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["ok"], false);
    assert!(stderr(&o).contains("FAIL [13]"));
    // the growth slope is exploratory and reported on its own
    let o = run(&["sweep", "--lmax", "20", "--tol-slope", "0.001"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("investigate:"));
    assert_eq!(stdout_json(&o)["ok"], true);
}

#[test]
fn diagnostics() {
    let o = run(&["sweep", "-D", "-7", "--lmax", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("≡ 1 (mod 8)"));
    let o = run(&["class", "-D", "-12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fundamental"));
    let o = run(&["eigen", "--lmax", "5000"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--lmax 240"));
    let o = run(&["eigen", "--lmin", "9", "--lmax", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--quick", "--tol-y", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("tolerance y must be positive"));
    let o = run(&["afe", "-D", "-8", "-n", "1", "-M", "64"]);
    assert!(stderr(&o).contains("below the suggested cap"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"D": [-24], "lmin": 3, "lmax": 9, "tol": {"route": 1e-6}}"#);
    let o = run(&["restrict", "--config", &c]);
    assert!(o.status.success());
    let recs = stdout_json(&o)["records"].as_array().unwrap().clone();
    assert!(recs.iter().all(|r| r["report"]["D"] == -24 && r["report"]["ell"].as_u64().unwrap() <= 9));
    let o = run(&["restrict", "--config", &c, "--lmax", "4", "-D", "-8"]);
    let recs = stdout_json(&o)["records"].as_array().unwrap().clone();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r["report"]["D"] == -8 && r["report"]["ell"].as_u64().unwrap() <= 4));

    let bad = write(dir.path(), "bad.json", "{\n  \"D\": [-8],\n  \"lmx\": 4\n}");
    let o = run(&["eigen", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("line 3") && e.contains("lmx"), "{e}");
}

#[test]
fn output_directory_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        bin().args(["sweep", "--lmax", "12", "--format", "csv"]).env("SPHERE_HECKE_OUT", dir.path()).output().unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("D,ell,eig_id,lambda3,norm_sq,ratio"));
    assert!(lines.count() >= 5);
    let dat = std::fs::read_to_string(dir.path().join("sweep.dat")).unwrap();
    let pts: Vec<Vec<f64>> = dat
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(pts.iter().all(|p| p.len() == 2));
}

#[test]
fn enumerate_and_cm() {
    let o = run(&["enumerate", "-n", "1,3,6"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let counts: Vec<u64> =
        v["records"].as_array().unwrap().iter().map(|r| r["hurwitz_count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [24, 96, 96]);
    let o = run(&["cm", "-D", "-4", "-n", "2", "-M", "10"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    let q = &v["records"][0]["qexp"];
    assert_eq!(q["weight"], 5);
    assert_eq!(q["level"], 4);
    assert_eq!(q["normalization"], "arithmetic");
    let o = run(&["cm", "-D", "-4", "-n", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
