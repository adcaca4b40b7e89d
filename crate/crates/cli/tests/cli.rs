use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qfisher(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfisher"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = qfisher(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(name)
}

fn assert_valid(schema: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&fs::read_to_string(schema_path(schema)).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{instance:#}");
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Header and rows of a CSV file, checking it parses with a one-line header.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn slit_defaults() {
    let dir = tmp();
    let out = dir.path().to_str().unwrap();
    let v = ok_json(&["--json", "--out", out, "slit"]);
    assert!((v["fisher"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-6);
    assert!((v["product"].as_f64().unwrap() - 0.25).abs() < 1e-6);
    assert_eq!(v["naive_width_product"]["label"], "heuristic");
    assert_valid("slit-summary.v1.json", &v);
    assert_eq!(read_json(&dir.path().join("slit_summary.json")), v);
    assert_valid("run-manifest.v1.json", &read_json(&dir.path().join("manifest.json")));

    let (header, rows) = read_csv(&dir.path().join("slit_density.csv"));
    assert_eq!(header, ["mu", "p"]);
    let centre = rows.iter().find(|r| r[0] == 0.0).expect("mu = 0 row");
    assert!((centre[1] - std::f64::consts::FRAC_1_PI).abs() < 1e-7);
}

#[test]
fn slit_hbar_scales_product() {
    let v = ok_json(&["--json", "--hbar", "2", "slit", "--a", "0.5"]);
    assert!((v["product"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn mz_limits() {
    let n = 12.0;
    let v = ok_json(&["--json", "mz", "--n1", "12", "--n2", "0"]);
    assert_eq!(v["F0"], n);
    assert!((v["crb_phase"].as_f64().unwrap() - 1.0 / n).abs() < 1e-15);
    assert_valid("mz-summary.v1.json", &v);

    let v = ok_json(&["--json", "mz", "--n1", "6", "--n2", "6"]);
    assert_eq!(v["delta_phi_linearized"], "undefined");
    let crb = v["crb_phase"].as_f64().unwrap();
    assert!((crb * n * n / 2.0 - 1.0).abs() < 2.0 / n + 1e-12);
    assert_valid("mz-summary.v1.json", &v);
}

#[test]
fn mz_single_particle_distribution() {
    let dir = tmp();
    let out = dir.path().to_str().unwrap();
    ok_json(&["--json", "--out", out, "mz", "--n1", "1", "--n2", "0", "--phi", "0"]);
    let (header, rows) = read_csv(&dir.path().join("mz_distribution.csv"));
    assert_eq!(header, ["k", "p"]);
    assert_eq!(rows, vec![vec![0.5, 1.0], vec![-0.5, 0.0]]);
}

#[test]
fn montecarlo_bernoulli_is_efficient_and_reproducible() {
    let args = [
        "--json", "--seed", "17", "montecarlo", "--model", "bernoulli", "--theta", "0.5", "--n", "1000", "--trials",
        "2000",
    ];
    let first = qfisher(&args);
    let second = qfisher(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    let eff = v["efficiency"].as_f64().unwrap();
    assert!((0.8..=1.2).contains(&eff), "{eff}");
    assert_valid("trial-report.v1.json", &v);
}

#[test]
fn montecarlo_slit_reports_efficiency() {
    let v = ok_json(&[
        "--json", "montecarlo", "--model", "slit", "--theta", "0.3", "--n", "1000", "--trials", "100",
    ]);
    assert!(v["efficiency"].as_f64().unwrap() > 0.0);
    assert_eq!(v["model"], "slit");
    assert_valid("trial-report.v1.json", &v);
}

#[test]
fn montecarlo_mz_with_bayes_mean() {
    let v = ok_json(&[
        "--json", "montecarlo", "--model", "mz", "--n1", "4", "--n2", "2", "--theta", "0.7", "--n", "300",
        "--trials", "200", "--estimator", "bayes-mean",
    ]);
    assert_eq!(v["estimator"], "bayes_mean");
    assert_valid("trial-report.v1.json", &v);
}

#[test]
fn accumulate_postselected() {
    let dir = tmp();
    let out = dir.path().to_str().unwrap();
    let v = ok_json(&["--json", "--out", out, "accumulate", "--j", "50", "--repeats", "4", "--postselect-zero"]);
    let var = v["variance"].as_f64().unwrap();
    assert!(var < 1.5e-4 && var > 1e-4 / 1.5, "{var}");
    assert_valid("accumulation-summary.v1.json", &v);
    let (header, rows) = read_csv(&dir.path().join("posterior.csv"));
    assert_eq!(header, ["shot", "phi", "density"]);
    assert_eq!(rows.len(), 5 * 4001);
}

#[test]
fn accumulate_without_shots_is_flat() {
    let dir = tmp();
    let out = dir.path().to_str().unwrap();
    let v = ok_json(&["--json", "--out", out, "accumulate", "--repeats", "0", "--points", "101"]);
    assert_eq!(v["prediction_1_over_njj"], Value::Null);
    assert_valid("accumulation-summary.v1.json", &v);
    let (_, rows) = read_csv(&dir.path().join("posterior.csv"));
    assert_eq!(rows.len(), 101);
    for r in rows {
        assert!((r[2] - 1.0 / std::f64::consts::PI).abs() < 1e-15);
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qfisher(args).status.code();
    assert_eq!(code(&["slit", "--a", "-1"]), Some(2));
    assert_eq!(code(&["mz", "--n1", "0", "--n2", "0"]), Some(2));
    assert_eq!(code(&["mz", "--n1", "5000", "--n2", "0"]), Some(4));
    assert_eq!(code(&["montecarlo", "--model", "bernoulli", "--theta", "2"]), Some(2));
    // every shot at φ = π/2 with j = 1 gives k = ±1, impossible inside a vanishing window
    assert_eq!(
        code(&["accumulate", "--j", "1", "--repeats", "1", "--phi-true", "1.5707963267948966", "--window", "1e-200"]),
        Some(6)
    );
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["unknown"]), Some(2));
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

#[test]
fn manifest_replays_byte_identically() {
    for args in [
        vec!["--seed", "5", "accumulate", "--j", "8", "--repeats", "3", "--phi-true", "0.3", "--points", "201"],
        vec!["--seed", "9", "montecarlo", "--model", "mz", "--theta", "0.4", "--n", "200", "--trials", "50"],
        vec!["mz", "--n1", "3", "--n2", "2", "--phi", "1.1"],
    ] {
        let dir = tmp();
        let out = dir.path().to_str().unwrap().to_string();
        let mut full = vec!["--out", out.as_str()];
        full.extend(&args);
        assert!(qfisher(&full).status.success());
        let before = snapshot(dir.path());

        let manifest = read_json(&dir.path().join("manifest.json"));
        let argv: Vec<String> = manifest["argv"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap().to_string())
            .collect();
        let listed: Vec<&str> = manifest["outputs"].as_array().unwrap().iter().map(|o| o.as_str().unwrap()).collect();
        for name in &listed {
            fs::remove_file(dir.path().join(name)).unwrap();
        }
        let replay = Command::new(env!("CARGO_BIN_EXE_qfisher")).args(&argv).output().unwrap();
        assert!(replay.status.success());
        assert_eq!(snapshot(dir.path()), before, "{args:?}");
    }
}

#[test]
fn two_shot_posterior_has_bessel_shape() {
    // J_0((j + 1/2) φ)⁴; the literal J_0(j φ)⁴ drifts by O(1/j) and is left to the acceptance run
    let dir = tmp();
    let out = dir.path().to_str().unwrap();
    ok_json(&["--json", "--out", out, "accumulate", "--j", "50", "--repeats", "2", "--postselect-zero"]);
    let (_, rows) = read_csv(&dir.path().join("posterior.csv"));
    let ratios: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == 2.0 && r[1].abs() * 50.0 <= 2.0)
        .map(|r| r[2] / qfisher::special::bessel_j(0, 50.5 * r[1]).powi(4))
        .collect();
    assert!(ratios.len() > 50);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((hi - lo) / (hi + lo) < 0.02, "{lo} .. {hi}");
}
