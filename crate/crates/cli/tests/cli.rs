use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_gaussdiv");

const TWO_PHASE: &str =
    r#"{"type":"rates","segments":[{"t0":0,"t1":1,"eps":0,"mu":1},{"t0":1,"t1":2,"eps":1,"mu":0}]}"#;
const STRONG: &str =
    r#"{"type":"rates","segments":[{"t0":0,"t1":1,"eps":0,"mu":1},{"t0":1,"t1":1.6,"eps":-1,"mu":0}]}"#;
const DAMPING: &str = r#"{"type":"damping","gamma":0.5,"nu_inf":0.5,"horizon":4}"#;
const QBM: &str = r#"{"type":"qbm","omega0":1,"omega_c":0.5,"alpha":0.2,"T_bath":0,"horizon":30}"#;

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], input: &Path) -> Output {
    Command::new(BIN).args(args).arg(input).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o).lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn channel_examples() {
    let dir = TempDir::new().unwrap();
    let h = 0.5f64.sqrt();
    let cases = [
        (format!(r#"{{"n":1,"X":[[{h},0],[0,{h}]],"Y":[[0.25,0],[0,0.25]]}}"#), "CP"),
        (r#"{"n":1,"X":[[1,0],[0,-1]],"Y":[[0,0],[0,0]]}"#.to_string(), "P_not_CP"),
        (r#"{"n":1,"X":[[1,0],[0,1]],"Y":[[-0.25,0],[0,-0.25]]}"#.to_string(), "NP"),
    ];
    for (body, class) in cases {
        let o = run(&["check-channel"], &write(&dir, "c.json", &body));
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["class"], class);
        assert!(v["p_margin"].is_number());
        assert!(v.get("caveat").is_none());
    }
}

#[test]
fn multimode_channel_has_caveat() {
    let dir = TempDir::new().unwrap();
    let body = r#"{"n":2,"X":[[1,0,0,0],[0,-1,0,0],[0,0,1,0],[0,0,0,-1]],"Y":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
    let o = run(&["check-channel"], &write(&dir, "c.json", body));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["caveat"], "falsifier-only");
    assert_eq!(v["class"], "P_not_CP");
}

#[test]
fn classify_examples() {
    let dir = TempDir::new().unwrap();
    let o = run(&["classify-process"], &write(&dir, "d.json", DAMPING));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["class"], "markovian");

    let o = run(&["classify-process"], &write(&dir, "t.json", TWO_PHASE));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["class"], "weak");
    let crossings = v["crossings"].as_array().unwrap();
    assert_eq!(crossings.len(), 1);
    let t = crossings[0]["t"].as_f64().unwrap();
    assert!((t - 1.0).abs() <= 2.0 / (100.0 * 400.0), "crossing at {t}");
    assert_eq!(crossings[0]["from"], "CP");
    assert_eq!(crossings[0]["to"], "P_not_CP");
    assert_eq!(v["samples"].as_array().unwrap().len(), 400);

    let o = run(&["classify-process", "--grid", "200"], &write(&dir, "q.json", QBM));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["class"], "strong");
}

#[test]
fn unphysical_process_reports_and_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "s.json", STRONG);
    let o = run(&["classify-process"], &input);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["class"], "strong");
    assert!(!v["physical"].as_bool().unwrap());

    let o = run(&["physicality", "--format", "json"], &input);
    assert_eq!(o.status.code(), Some(2));
    let tv = json(&o)["violation_time"].as_f64().unwrap();
    assert!((tv - (1.0 + 3f64.ln() / 2.0)).abs() < 1e-6, "violation at {tv}");
}

#[test]
fn trajectory_csv_contract() {
    let dir = TempDir::new().unwrap();
    let o = run(&["trajectory", "--grid", "50"], &write(&dir, "d.json", DAMPING));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("t,eps,mu,delta,kappa,region\n"));
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 50);
    let mut last = f64::NEG_INFINITY;
    for r in &rows {
        let t: f64 = r[0].parse().unwrap();
        assert!(t > last);
        last = t;
        assert!((r[1].parse::<f64>().unwrap() + 0.5).abs() < 1e-9);
        assert!((r[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
        assert_eq!(r[5], "CP");
    }

    let o = run(&["trajectory"], &write(&dir, "t.json", TWO_PHASE));
    for r in csv_rows(&o) {
        let t: f64 = r[0].parse().unwrap();
        let (eps, mu) = if t < 1.0 { (0.0, 1.0) } else { (1.0, 0.0) };
        assert!((r[1].parse::<f64>().unwrap() - eps).abs() < 1e-6);
        assert!((r[2].parse::<f64>().unwrap() - mu).abs() < 1e-6);
    }
}

#[test]
fn physicality_floor_on_long_amplification() {
    let dir = TempDir::new().unwrap();
    let body = r#"{"type":"rates","segments":[{"t0":0,"t1":1,"eps":0,"mu":1},{"t0":1,"t1":20,"eps":1,"mu":0}]}"#;
    let o = run(&["physicality", "--grid", "2000"], &write(&dir, "l.json", body));
    assert_eq!(o.status.code(), Some(0));
    let floor = csv_rows(&o)
        .iter()
        .filter(|r| r[0].parse::<f64>().unwrap() >= 1.0)
        .map(|r| r[3].parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!((floor - 0.5).abs() < 1e-6, "floor {floor}");
}

#[test]
fn amplification_windows() {
    let dir = TempDir::new().unwrap();
    let o = run(&["amplification"], &write(&dir, "d.json", DAMPING));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["windows"].as_array().unwrap().len(), 0);
    let o = run(&["amplification"], &write(&dir, "t.json", TWO_PHASE));
    let w = &json(&o)["windows"][0];
    assert!((w["start"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(w["end"].as_f64().unwrap(), 2.0);
    assert_eq!(w["max_gap"].as_f64().unwrap(), 1.0);
}

#[test]
fn malformed_input_exits_1() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{");
    assert_eq!(run(&["classify-process"], &bad).status.code(), Some(1));
    let good = write(&dir, "d.json", DAMPING);
    assert_eq!(run(&["trajectory", "--bogus"], &good).status.code(), Some(1));
    assert_eq!(run(&["trajectory", "--grid", "1"], &good).status.code(), Some(1));
    assert_eq!(run(&["trajectory", "--tol", "0"], &good).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["check-channel"], &missing).status.code(), Some(1));
    let negative = write(&dir, "n.json", r#"{"type":"damping","gamma":-1,"nu_inf":0.5,"horizon":4}"#);
    assert_eq!(run(&["trajectory"], &negative).status.code(), Some(1));
}

#[test]
fn singular_process_exits_3() {
    let dir = TempDir::new().unwrap();
    let body = r#"{"type":"tabulated","n":1,"times":[0,1,2],
        "X":[[[1,0],[0,1]],[[0,0],[0,0]],[[-1,0],[0,-1]]],
        "Y":[[[0,0],[0,0]],[[1,0],[0,1]],[[1,0],[0,1]]]}"#;
    let o = run(&["trajectory", "--grid", "40"], &write(&dir, "s.json", body));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "q.json", QBM);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = Command::new(BIN)
            .args(["classify-process", "--grid", "200", "--out"])
            .arg(out)
            .arg(&input)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let single = Command::new(BIN)
        .env("GAUSSDIV_THREADS", "1")
        .args(["classify-process", "--grid", "200"])
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(single.stdout, std::fs::read(&a).unwrap());

    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 3, "temporary files left behind");
}
