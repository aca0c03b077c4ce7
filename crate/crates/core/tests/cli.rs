use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wmlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn wmlab_with_workers(args: &[&str], workers: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wmlab"))
        .args(args)
        .env("WMLAB_WORKERS", workers)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn records(text: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn single_point_norm_is_one() {
    let out = wmlab(&["norm", "--generator", "constant", "--p", "2", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "norm");
    assert_eq!(rows[0][6].parse::<f64>().unwrap(), 1.0);
    assert_eq!(&rows[0][8], "pass");
}

#[test]
fn header_matches_documented_columns() {
    let out = wmlab(&["norm", "--n", "3"]);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "task,generator,alpha,beta,p,N,value,bound,verdict,slack,residual,iterations,seed"
    );
}

#[test]
fn conditions_for_linear_weights() {
    let out = wmlab(&[
        "check",
        "--generator",
        "power",
        "--alpha",
        "1",
        "--p",
        "2",
        "--n",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&stdout(&out));
    let l: f64 = rows[0][6].parse().unwrap();
    let bound: f64 = rows[0][7].parse().unwrap();
    assert!((l - 0.5).abs() < 1e-14);
    assert!((bound - 16.0 / 9.0).abs() < 1e-13);
}

#[test]
fn schur_certificate_row() {
    let out = wmlab(&[
        "schur",
        "--variant",
        "bennett",
        "--alpha",
        "1",
        "--p",
        "2",
        "--n",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&stdout(&out));
    assert_eq!(&rows[0][8], "pass");
    assert!((rows[0][6].parse::<f64>().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn condition_matrix_and_json() {
    let out = wmlab(&[
        "check",
        "--generator",
        "power",
        "--alpha",
        "0.5,1",
        "--p",
        "2,-2",
        "--n",
        "32",
        "--l",
        "0.5",
        "--format",
        "matrix",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert_eq!(header.matches("p=").count(), 4);
    assert!(text.lines().any(|l| l.starts_with("cartlidge")));
    assert!(text.lines().any(|l| l.starts_with("gao")));

    let out = wmlab(&[
        "check",
        "--generator",
        "power",
        "--alpha",
        "1",
        "--p",
        "2",
        "--n",
        "8",
        "--format",
        "json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = v[0]["details"]["reports"].as_array().unwrap();
    let readings: Vec<&str> = reports
        .iter()
        .filter_map(|r| r["details"]["reading"].as_str())
        .collect();
    assert_eq!(readings, ["finite_section", "cartlidge_bound"]);
}

#[test]
fn config_file_sweep_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sweep.json",
        r#"{
            "generator": {"kind": "power"},
            "p_grid": [1.5, 2, -2],
            "alpha_grid": [0.5, 1],
            "n_grid": [4, 16],
            "tasks": ["norm", "conditions", "carleman", "inequalities"],
            "seed": 3,
            "l_grid": [0.5, 0.9]
        }"#,
    );
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let a = wmlab_with_workers(
        &["sweep", "--config", &cfg, "--out", out_a.to_str().unwrap()],
        "1",
    );
    let b = wmlab_with_workers(
        &["sweep", "--config", &cfg, "--out", out_b.to_str().unwrap()],
        "4",
    );
    // α = 0.5 is outside the family's range, so those cells fail
    assert_eq!(a.status.code(), Some(2));
    assert_eq!(b.status.code(), Some(2));
    let text_a = std::fs::read(&out_a).unwrap();
    assert_eq!(text_a, std::fs::read(&out_b).unwrap());
    let rows = records(std::str::from_utf8(&text_a).unwrap());
    // norm 2·3·2, conditions 2·3·2, carleman 2·2, inequalities 2·3·2
    assert_eq!(rows.len(), 12 + 12 + 4 + 12);
    assert!(rows.iter().all(|r| &r[12] == "3"));
    let errors = rows.iter().filter(|r| &r[8] == "error").count();
    assert!(errors > 0);
    assert!(rows
        .iter()
        .filter(|r| &r[0] == "carleman")
        .all(|r| r[4].is_empty()));
}

#[test]
fn flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        r#"{"generator": {"kind": "constant"}, "p_grid": [2], "alpha_grid": [1],
            "n_grid": [2], "tasks": ["norm"], "output": {"format": "json"}}"#,
    );
    let out = wmlab(&["norm", "--config", &cfg, "--n", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = records(&stdout(&out));
    assert_eq!(&rows[0][5], "3");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        wmlab(&["norm", "--p", "0.5", "--n", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(
        wmlab(&["norm", "--p", "1", "--n", "3"]).status.code(),
        Some(1)
    );
    assert_eq!(wmlab(&["norm"]).status.code(), Some(1));
    assert_eq!(wmlab(&["bogus"]).status.code(), Some(1));
    let bad = write_config(&dir, "bad.json", "{\"p_grid\": []}");
    assert_eq!(wmlab(&["sweep", "--config", &bad]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        wmlab(&["sweep", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let unwritable = Path::new("/nonexistent-dir/out.csv");
    assert_eq!(
        wmlab(&["norm", "--n", "2", "--out", unwritable.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
    let out = wmlab(&[
        "norm",
        "--generator",
        "reference_prime",
        "--alpha",
        "1.5,3",
        "--n",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&stdout(&out)).len(), 2);
    assert_eq!(wmlab(&["--help"]).status.code(), Some(0));
}
