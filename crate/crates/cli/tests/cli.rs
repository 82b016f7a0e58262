use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use sc_blaschke_cli::document::{AnalysisReport, BoundsDocument, SpecDocument};
use tempfile::TempDir;

const KOEBE: &str = r#"{
  "kind": "interior",
  "b1": { "rotation_deg": 0, "zeros": [] },
  "b2": { "rotation_deg": 0, "zeros": [[-0.5, 0]] }
}"#;

fn scmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scmap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn opposite_pair(r: f64) -> String {
    format!(
        r#"{{"kind":"interior","b1":{{"rotation_deg":0,"zeros":[[{},0]]}},"b2":{{"rotation_deg":0,"zeros":[[{r},0]]}}}}"#,
        -r
    )
}

fn analyze(spec: &str) -> (Output, Option<AnalysisReport>, TempDir) {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", spec);
    let out = dir.path().join("report.json");
    let svg = dir.path().join("fig.svg");
    let output = scmap(&[
        "analyze",
        &spec,
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let report = std::fs::read_to_string(&out)
        .ok()
        .map(|text| AnalysisReport::parse(&text).unwrap());
    (output, report, dir)
}

#[test]
fn koebe_analysis() {
    let (output, report, dir) = analyze(KOEBE);
    assert_eq!(output.status.code(), Some(0));
    let report = report.unwrap();
    let betas: Vec<f64> = report.prevertices.iter().map(|p| p.beta).collect();
    assert!((betas[0] - 1.5).abs() < 1e-10 && (betas[1] + 0.5).abs() < 1e-10);
    assert_eq!(report.winding, Some(0));
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<title>B2 zero</title>"));
}

#[test]
fn common_zero_is_a_usage_error() {
    let spec = KOEBE.replace("\"zeros\": []", "\"zeros\": [[-0.5, 0]]");
    let (output, report, _dir) = analyze(&spec);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("common zero"));
    assert!(report.is_none());
}

#[test]
fn unknown_fields_are_rejected() {
    let spec = KOEBE.replace("\"kind\"", "\"extra\": true, \"kind\"");
    let (output, _, _dir) = analyze(&spec);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn missing_spec_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let output = scmap(&[
        "analyze",
        "/nonexistent/spec.json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(!output.stderr.is_empty());
}

#[test]
fn inadmissible_spec_exits_2() {
    let (output, report, dir) = analyze(&opposite_pair(0.2));
    assert_eq!(output.status.code(), Some(2));
    let report = report.unwrap();
    assert!(!report.admissible);
    assert!(report.prevertices.is_empty());
    assert!(Path::new(&dir.path().join("fig.svg")).exists());
}

fn bounds(kind: &str, n: &str, r: &str) -> BoundsDocument {
    let output = scmap(&["bounds", "--kind", kind, "--n", n, "--r", r]);
    assert_eq!(output.status.code(), Some(0));
    serde_json::from_slice(&output.stdout).unwrap()
}

#[test]
fn bounds_examples() {
    let b = bounds("interior", "1", "0.5");
    assert!((b.min_sep - 2.0 * PI / 3.0).abs() < 1e-11);
    assert!((b.max_sep - 4.0 * PI / 3.0).abs() < 1e-11);
    assert_eq!(b.window, None);
    let b = bounds("interior", "4", "0");
    assert!((b.min_sep - 2.0 * PI / 5.0).abs() < 1e-11);
    assert!((b.max_sep - 2.0 * PI / 5.0).abs() < 1e-11);
    let b = bounds("exterior", "4", "0");
    assert!((b.min_sep - PI / 3.0).abs() < 1e-11);
    assert!((b.max_sep - PI / 3.0).abs() < 1e-11);
    let b = bounds("exterior", "3", "0.01");
    let [lo, hi] = b.window.unwrap();
    assert!(lo < hi);
    let raw = scmap(&["bounds", "--kind", "interior", "--n", "2", "--r", "0.01"]);
    assert!(String::from_utf8_lossy(&raw.stdout).contains("corollary7_window"));
}

#[test]
fn invalid_bounds_parameters() {
    for args in [["0", "0.5"], ["2", "1.0"], ["2", "-0.1"]] {
        let output = scmap(&[
            "bounds", "--kind", "interior", "--n", args[0], "--r", args[1],
        ]);
        assert_eq!(output.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn radius_of_the_koebe_degrees() {
    let output = scmap(&["radius", "--kind", "interior", "--d1", "0", "--d2", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((doc["r_min"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn verify_needs_trials() {
    let output = scmap(&["verify", "--seed", "1", "--trials", "0"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn verify_is_deterministic() {
    let a = scmap(&["verify", "--seed", "7", "--trials", "12"]);
    let b = scmap(&["verify", "--seed", "7", "--trials", "12"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn trace_prints_the_koebe_vertex() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "spec.json", KOEBE);
    let svg = dir.path().join("fig.svg");
    let output = scmap(&["trace", &spec, "--svg", svg.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("vertex=infinite"));
    assert!(stdout.contains("vertex=-0.250000"));
    assert!(svg.exists());
}

#[test]
fn bad_flags_exit_1() {
    assert_eq!(
        scmap(&["bounds", "--kind", "annulus", "--n", "1", "--r", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(scmap(&["frobnicate"]).status.code(), Some(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spec_documents_round_trip(
        exterior in any::<bool>(),
        rot in 0.0..360.0f64,
        z1 in prop::collection::vec((-0.6..0.6f64, -0.6..0.6f64), 0..4),
        z2 in prop::collection::vec((-0.6..0.6f64, -0.6..0.6f64), 0..3),
    ) {
        let pairs = |z: &[(f64, f64)]| {
            z.iter().map(|(a, b)| format!("[{a},{b}]")).collect::<Vec<_>>().join(",")
        };
        let text = format!(
            r#"{{"kind":"{}","b1":{{"rotation_deg":{rot},"zeros":[{}]}},"b2":{{"rotation_deg":0,"zeros":[{}]}}}}"#,
            if exterior { "exterior" } else { "interior" },
            pairs(&z1),
            pairs(&z2),
        );
        let Ok(doc) = SpecDocument::parse(&text) else {
            return Ok(());
        };
        prop_assert_eq!(&SpecDocument::parse(&doc.to_json()).unwrap(), &doc);
        let spec = doc.to_spec().unwrap();
        let report = sc_blaschke_cli::analyze::analyze(&spec, 1e-8).unwrap().report;
        prop_assert_eq!(AnalysisReport::parse(&report.to_json()).unwrap(), report);
    }
}
