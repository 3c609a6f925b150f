use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qps(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qps")).args(args).output().expect("qps runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn poincare_passes_with_all_entries() {
    let out = qps(&["verify", "poincare"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suite"], "poincare");
    assert_eq!(v["entries"].as_array().unwrap().len(), 100);
    assert_eq!(v["failed"], 0);
}

#[test]
fn failing_hamiltonian_exits_one_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("em.json");
    let out = qps(&["verify", "emrelation", "--h", "Lam*omega + P1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = read_json(&path);
    assert!(v["failed"].as_u64().unwrap() > 0);
    let failing: Vec<&Value> = v["entries"].as_array().unwrap().iter().filter(|e| e["pass"] == false).collect();
    assert!(failing.iter().all(|e| e["residual"] != "0"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn localize_writes_curve_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nw.csv");
    let out = qps(&["localize", "--m", "1", "--sigma", "0.1", "--t", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("x,t,density\n"));
    let v = read_json(&path.with_extension("json"));
    assert!(v["outside_cone_probability"].as_f64().unwrap() > 0.0);
    let slope = v["fitted_slope"].as_f64().unwrap();
    assert!((-4.0..=-1.0).contains(&slope));
}

#[test]
fn artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [&["fock", "duality", "--seed", "3"][..], &["causality", "--npts", "256", "--pmax", "20"][..]] {
        let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
        for p in [&a, &b] {
            let mut full = args.to_vec();
            full.extend(["--out", p.to_str().unwrap()]);
            assert_eq!(qps(&full).status.code(), Some(0), "{args:?}");
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{args:?}");
    }
}

#[test]
fn bad_flags_are_usage_errors() {
    for args in [
        &["verify", "nonsense"][..],
        &["localize", "--m", "-1"][..],
        &["numeric", "residuals", "--d", "3", "--npts", "64"][..],
        &["fock", "duality", "--sites", "40", "--nmax", "6"][..],
        &["fock", "expectation", "--y", "2.5"][..],
        &["verify", "emrelation", "--h", "Lam*omega + Q1"][..],
        &["causality", "--region", "1,0"][..],
    ] {
        assert_eq!(qps(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn report_csv_has_one_row_per_entry() {
    let out = qps(&["verify", "boost", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap().iter().next(), Some("id"));
    assert_eq!(rows.records().count(), 22);
}

#[test]
fn fock_expectation_reports_every_site() {
    let out = qps(&["fock", "expectation", "--sites", "6", "--y", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["site"], 2);
}

#[test]
fn numeric_casimir_on_a_small_grid() {
    let out = qps(&["numeric", "casimir", "--s", "0.5", "--npts", "16", "--pmax", "1.1", "--tol", "1e-6"]);
    assert_eq!(out.status.code(), Some(0));
}
