use std::process::{Command, Output};

use serde_json::Value;

fn ree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ree")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ree-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn compute_w() {
    let o = ree(&["compute", "--state", "w", "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let value = v["value"].as_f64().unwrap();
    assert!((value - (2.0 * 3f64.log2() - 2.0)).abs() < 5e-3);
    for k in ["gap_estimate", "iterations_used", "restarts_agreeing", "closest"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["closest"]["dims"], serde_json::json!([2, 2, 2]));
}

#[test]
fn bounds_ghz() {
    let o = ree(&["bounds", "--state", "ghz:0.70710678", "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["lower_thm1"].as_f64().unwrap() - 1.0).abs() < 5e-3);
    assert!((v["upper_thm1"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    assert_eq!(v["state_label"], "ghz:0.70710678");
}

#[test]
fn verify_passes() {
    let o = ree(&["verify", "--samples", "200", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["min_bi"].as_f64().unwrap() >= -1e-8);
    assert!(v["min_tri"].as_f64().unwrap() >= -1e-8);
    assert_eq!(v["violations_bi"], 0);
}

#[test]
fn input_errors_exit_one() {
    for args in [
        vec!["compute", "--state", "bell"],
        vec!["compute"],
        vec!["scan"],
        vec!["verify", "--samples", "0"],
        vec!["compute", "--state", "w", "--format", "xml"],
        vec!["frobnicate"],
        vec!["bounds", "--state", "epr"],
        vec!["mregs", "--state", "file:/nonexistent/state.json"],
    ] {
        let o = ree(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn malformed_state_file_names_the_field() {
    let path = tmp("bad.json");
    std::fs::write(&path, r#"{"dims": [2, 2], "amplitudes": [[1, 0], [0, 0], [0, 0], [0, "x"]]}"#).unwrap();
    let spec = format!("file:{}", path.display());
    let o = ree(&["compute", "--state", &spec]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("amplitudes[3]"));

    std::fs::write(&path, "{\n  \"dims\": [2, 2],\n  \"amplitudes\": [\n").unwrap();
    let o = ree(&["compute", "--state", &spec]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn state_files() {
    let path = tmp("epr_zero.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // (|000⟩ + |110⟩)/√2: an EPR pair on A, B with C in |0⟩.
    let amps: Vec<[f64; 2]> = (0..8).map(|i| if i == 0 || i == 6 { [h, 0.0] } else { [0.0, 0.0] }).collect();
    std::fs::write(&path, serde_json::json!({"dims": [2, 2, 2], "amplitudes": amps}).to_string()).unwrap();
    let spec = format!("file:{}", path.display());
    let o = ree(&["mregs", "--state", &spec, "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["s_ab"].as_f64().unwrap() - 1.0).abs() < 5e-3);
    assert_eq!(v["approximation"], "single-copy");

    // A mixed density file is fine for compute but not for bounds.
    let mixed = tmp("mixed.json");
    let rows: Vec<Vec<[f64; 2]>> = (0..4)
        .map(|r| (0..4).map(|c| if r == c { [0.25, 0.0] } else { [0.0, 0.0] }).collect())
        .collect();
    std::fs::write(&mixed, serde_json::json!({"dims": [2, 2], "density": rows}).to_string()).unwrap();
    let spec = format!("file:{}", mixed.display());
    let o = ree(&["compute", "--state", &spec, "--restarts", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["value"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(ree(&["bounds", "--state", &spec]).status.code(), Some(1));
}

fn csv_table(text: &str) -> Vec<(String, String)> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    header.iter().zip(row).map(|(h, v)| (h.to_string(), v.to_string())).collect()
}

fn assert_same_numbers(json: &Value, csv: &[(String, String)]) {
    for (k, v) in csv {
        let Some(j) = json.get(k) else { continue };
        if let (Some(a), Ok(b)) = (j.as_f64(), v.parse::<f64>()) {
            let scale = a.abs().max(1e-300);
            assert!((a - b).abs() <= 1e-9 * scale, "{k}: {a} vs {b}");
        }
    }
}

#[test]
fn csv_matches_json() {
    let args = ["bounds", "--state", "w", "--restarts", "2"];
    let j = json(&ree(&args));
    let c = stdout(&ree(&[&args[..], &["--format", "csv"]].concat()));
    let table = csv_table(&c);
    assert_eq!(table.len(), j.as_object().unwrap().len());
    assert_same_numbers(&j, &table);

    let args = ["compute", "--state", "ghz:0.6", "--restarts", "2"];
    let j = json(&ree(&args));
    let c = stdout(&ree(&[&args[..], &["--format", "csv"]].concat()));
    assert_same_numbers(&j, &csv_table(&c));
    let first_weight = c.split("\n\n").nth(1).unwrap().lines().nth(1).unwrap().split(',').nth(1).unwrap();
    let jw = j["closest"]["terms"][0]["weight"].as_f64().unwrap();
    assert_eq!(first_weight.parse::<f64>().unwrap(), jw);

    let args = ["mregs", "--state", "ghz", "--restarts", "2"];
    let j = json(&ree(&args));
    let c = stdout(&ree(&[&args[..], &["--format", "csv"]].concat()));
    assert_same_numbers(&j, &csv_table(&c));
}

#[test]
fn output_file_and_determinism() {
    let path = tmp("scan.json");
    let p = path.to_str().unwrap();
    let o = ree(&["scan", "--samples", "2", "--seed", "5", "--restarts", "2", "--output", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let first = std::fs::read(&path).unwrap();
    let again = ree(&["scan", "--samples", "2", "--seed", "5", "--restarts", "2"]);
    assert_eq!(first, again.stdout);
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][1]["state_label"], "haar:1");
    assert!(v["summary"]["sandwich_violations"].as_array().unwrap().is_empty());
}

#[test]
fn scan_rows_are_individually_reproducible() {
    let opt = ree_core::OptimizerConfig::default().with_restarts(2);
    let all = ree_cli::scan(3, 11, &opt).unwrap();
    let (third, _) = ree_cli::scan_sample(11, 2, &opt).unwrap();
    assert_eq!(all.rows[2], third);
}
