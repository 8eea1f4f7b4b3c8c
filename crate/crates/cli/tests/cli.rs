//! End-to-end runs of the `squeeze` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn squeeze(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(args)
        .env_remove("SQUEEZE_SAMPLES")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn record(args: &[&str]) -> Value {
    let out = squeeze(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1, "one record per line: {text}");
    serde_json::from_str(&text).expect("valid JSON")
}

fn value(v: &Value) -> f64 {
    v["value"].as_f64().expect("numeric value")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.expect("valid CSV").iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn exact_type_i() {
    let r = record(&["exact", "--domain", "typeI:2,3"]);
    assert_eq!(value(&r), 0.7071067811865476);
    assert_eq!(r["tag"], "exact");
    assert_eq!(r["method"], "kubota-constant");
}

#[test]
fn exact_product() {
    let r = record(&["exact", "--domain", "product:typeIV:3+typeIV:7"]);
    assert_eq!(value(&r), 0.5);
    assert_eq!(r["tag"], "exact");
}

#[test]
fn exact_punctured_ball() {
    let r = record(&["exact", "--domain", "punctured-ball:2", "--point", "0.3,0"]);
    assert_eq!(value(&r), 0.3);
    assert_eq!(r["tag"], "exact");
}

#[test]
fn exact_record_has_fixed_key_order() {
    let out = squeeze(&["exact", "--domain", "typeI:2,3"]);
    let text = stdout(&out);
    let keys = ["domain", "point", "value", "tag", "method", "witness", "tool_version"];
    let positions: Vec<usize> = keys
        .iter()
        .map(|k| text.find(&format!("\"{k}\":")).expect("key present"))
        .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn bound_annulus() {
    let r = record(&["bound", "--annulus", "0.25", "--rho", "0.5"]);
    assert_eq!(value(&r), 0.2857142857142857);
    assert_eq!(r["tag"], "lower");
}

#[test]
fn bound_punctured_ball() {
    let r = record(&[
        "bound",
        "--punctured-ball",
        "2",
        "--punctures",
        "0,0",
        "--point",
        "0.25,0",
    ]);
    assert!((value(&r) - 0.25).abs() <= 1e-12);
    assert_eq!(r["tag"], "upper");
}

#[test]
fn bound_excised_far_region() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("excised_far.json");
    std::fs::write(
        &path,
        r#"{"u": 0.2, "v": 0.255, "w": 0.265, "excisions": [{"a_re": 0.5, "a_im": 0.0, "r": 0.25}]}"#,
    )
    .unwrap();
    let r = record(&["bound", "--excised", path.to_str().unwrap(), "--point", "0,0"]);
    // σ⁻¹(σ((v+w)/2) − σ(v)) with (v+w)/2 = 0.26
    let (m, v): (f64, f64) = (0.26, 0.255);
    let far = (m - v) / (1.0 - m * v);
    assert!((value(&r) - far).abs() <= 1e-15, "{r}");
    assert_eq!(r["tag"], "lower");
    assert_eq!(r["method"], "excised-far");
}

#[test]
fn bound_excised_overlap_is_rejected() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("excised_overlap.json");
    std::fs::write(
        &path,
        r#"{"u": 0.2, "v": 0.3, "w": 0.35, "excisions": [{"a_re": 0.0, "a_im": 0.0, "r": 0.25}, {"a_re": 0.5, "a_im": 0.0, "r": 0.25}]}"#,
    )
    .unwrap();
    let out = squeeze(&["bound", "--excised", path.to_str().unwrap(), "--point", "0.9,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn caratheodory_estimate() {
    let r = record(&["bound", "--annulus", "0.25", "--rho", "0.5", "--caratheodory"]);
    // s/(4δ) with s = 2/7 and δ = 1/4
    assert!((value(&r) - 2.0 / 7.0).abs() <= 1e-15);
    assert_eq!(r["method"], "caratheodory-koebe");
}

fn search_args(extra: &[&'static str]) -> Vec<&'static str> {
    let mut args = vec!["search", "--annulus", "0.25", "--rho", "0.5"];
    args.extend_from_slice(extra);
    args
}

#[test]
fn search_containment_and_determinism() {
    let args = search_args(&["--degree", "2", "--budget", "500", "--seed", "42"]);
    let first = squeeze(&args);
    assert!(first.status.success());
    let r: Value = serde_json::from_str(&stdout(&first)).unwrap();
    let best = r["best_value"].as_f64().unwrap();
    assert!(best >= 0.285714285 - 1e-9 && best < 1.0, "{best}");
    assert!(best >= r["tier_a_value"].as_f64().unwrap() - 1e-9);
    for key in ["conjecture_value", "conjecture_gap", "seed", "evaluations"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["seed"], 42);
    assert_eq!(r["tag"], "lower");
    let second = squeeze(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn search_degree_zero_is_tier_a() {
    let r = record(&search_args(&["--degree", "0"]));
    assert_eq!(r["best_value"], r["tier_a_value"]);
}

#[test]
fn search_rejects_bad_flags() {
    assert_eq!(squeeze(&search_args(&["--degree", "9"])).status.code(), Some(2));
    assert_eq!(squeeze(&search_args(&["--degree", "x"])).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(search_args(&["--degree", "0"]))
        .env("SQUEEZE_SAMPLES", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'lots'"));
}

#[test]
fn search_sample_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(search_args(&["--degree", "0"]))
        .env("SQUEEZE_SAMPLES", "512")
        .output()
        .unwrap();
    let r: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(r["boundary_samples"], 512);
}

#[test]
fn table_annulus_rows() {
    let out = squeeze(&["table", "--annulus", "0.25", "--samples", "5"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0], ["rho", "lower_bound", "conjecture"]);
    assert_eq!(rows[1][0], "0.5");
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.2857142857142857);
    let rhos: Vec<f64> = rows[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(rhos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn table_last_row_near_one() {
    let out = squeeze(&["table", "--annulus", "0.25", "--samples", "1000"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1001);
    let last: f64 = rows[1000][1].parse().unwrap();
    assert!(last > 0.99, "{last}");
}

#[test]
fn table_punctured_ball() {
    let out = squeeze(&["table", "--punctured-ball", "2", "--samples", "3"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["rho", "upper_bound"]);
    for row in &rows[1..] {
        let (rho, upper): (f64, f64) = (row[0].parse().unwrap(), row[1].parse().unwrap());
        assert!((rho - upper).abs() <= 1e-12);
    }
}

#[test]
fn table_rejects_small_grid() {
    assert_eq!(
        squeeze(&["table", "--annulus", "0.25", "--samples", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn table_json_matches_csv() {
    let csv_out = stdout(&squeeze(&["table", "--annulus", "0.25", "--samples", "4"]));
    let json_out = stdout(&squeeze(&[
        "--out",
        "json",
        "table",
        "--annulus",
        "0.25",
        "--samples",
        "4",
    ]));
    let rows = csv_rows(&csv_out);
    let records: Vec<Value> = json_out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 8);
    for (i, row) in rows[1..].iter().enumerate() {
        assert_eq!(row[1], records[2 * i]["value"].to_string());
        assert_eq!(row[2], records[2 * i + 1]["value"].to_string());
    }
}

#[test]
fn csv_and_json_agree() {
    for args in [
        vec!["bound", "--annulus", "0.3", "--point", "0.41,0.17"],
        vec!["exact", "--domain", "typeIII:5"],
        vec!["bound", "--c-constant", "0.2,0.3,0.6"],
    ] {
        let json = record(&args);
        let mut csv_args = vec!["--out", "csv"];
        csv_args.extend(&args);
        let rows = csv_rows(&stdout(&squeeze(&csv_args)));
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][2], "value");
        assert_eq!(rows[1][2], json["value"].to_string(), "{args:?}");
        assert_eq!(rows[1][3], json["tag"].as_str().unwrap());
        assert_eq!(rows[1][4], json["method"].as_str().unwrap());
    }
}

#[test]
fn values_round_trip_through_json() {
    let r = record(&["bound", "--annulus", "0.3", "--point", "0.41,0.17"]);
    let text = r["value"].to_string();
    let parsed: f64 = text.parse().unwrap();
    assert_eq!(serde_json::to_string(&parsed).unwrap(), text);
}

#[test]
fn check_suites() {
    for suite in ["metrics", "rouche", "symmetric", "planar", "search"] {
        let out = squeeze(&["check", "--suite", suite]);
        assert_eq!(out.status.code(), Some(0), "{suite}: {}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
    let out = squeeze(&["check", "--suite", "symmetric"]);
    assert!(stdout(&out).contains("PASS symmetric_domains sandwich_typeI"));
}

#[test]
fn check_unknown_suite() {
    assert_eq!(squeeze(&["check", "--suite", "bogus"]).status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_token() {
    for (args, token) in [
        (vec!["exact", "--domain", "typeV:3"], "typeV"),
        (vec!["exact", "--domain", "typeI:2,x"], "'x'"),
        (
            vec!["exact", "--domain", "punctured-ball:2", "--point", "0.3,zz"],
            "'zz'",
        ),
        (vec!["bound", "--c-constant", "0.2,0.3"], "0.2,0.3"),
    ] {
        let out = squeeze(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(token), "{args:?}: {err}");
    }
}

#[test]
fn points_outside_the_domain_are_input_errors() {
    assert_eq!(
        squeeze(&["bound", "--annulus", "0.25", "--rho", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        squeeze(&["exact", "--domain", "typeIV:2", "--point", "0.5,0,0,0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        squeeze(&["exact", "--domain", "punctured-ball:2"]).status.code(),
        Some(2)
    );
}
