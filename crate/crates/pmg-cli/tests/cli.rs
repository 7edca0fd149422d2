//! End-to-end checks of the `pmg` binary: formats, flags, and exit codes.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn pmg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pmg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_doc(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("pmg-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const K4: &str = r#"{
  "vertices": [{"id":"p"},{"id":"q"},{"id":"s"},{"id":"t"}],
  "edges": [
    {"u":"p","v":"q","length":"1/6"},
    {"u":"p","v":"s","length":"1/6"},
    {"u":"p","v":"t","length":"1/6"},
    {"u":"q","v":"s","length":"1/6"},
    {"u":"q","v":"t","length":"1/6"},
    {"u":"s","v":"t","length":"1/6"}
  ]
}"#;

#[test]
fn compute_exact_json() {
    let path = write_doc("k4.json", K4);
    let out = pmg(&[
        "compute",
        "--input",
        path.to_str().unwrap(),
        "--mode",
        "exact",
        "--format",
        "json",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tau"], "5/96");
    assert_eq!(v["theta"], "1");
    assert_eq!(v["phi"], "17/288");
    assert_eq!(v["g"], 3);
}

#[test]
fn compute_with_measures_csv() {
    let path = write_doc("k4m.json", K4);
    let out = pmg(&[
        "compute",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "csv",
        "--measures",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,key,value\n"));
    assert!(text.contains("invariant,tau,5/96"));
    assert!(text.contains("measure_total,canonical,1"));
    assert!(text.contains("measure_total,admissible,1"));
}

#[test]
fn family_ladder_exact_table_row() {
    let out = pmg(&[
        "family", "ladder", "--n", "5", "--a", "1", "--b", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ratios"]["tau"], "661/10868");
    assert_eq!(v["ratios"]["lambda"], "5/39");
    assert_eq!(v["length"], "13");
}

#[test]
fn family_complete4_polarized() {
    let out = pmg(&[
        "family",
        "complete4",
        "--lengths",
        "1/6,1/6,1/6,1/6,1/6,1/6",
        "--q",
        "1",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["theta"], "9"); // (1 + 2k)^2 at k = 1
    assert_eq!(v["gbar"], 7);
}

#[test]
fn family_example3_and_loop_strategies() {
    for strategy in ["analytic", "subdivide"] {
        let out = pmg(&[
            "family",
            "example3",
            "--a",
            "1",
            "--b",
            "1",
            "--c",
            "1",
            "--d",
            "1",
            "--e",
            "1",
            "--loop-strategy",
            strategy,
            "--format",
            "json",
        ]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["tau"], "1", "strategy {strategy}");
        assert_eq!(v["theta"], "500");
        assert_eq!(v["lambda"], "92/25");
    }
}

#[test]
fn machine_mode_prints_significant_digits() {
    let out = pmg(&[
        "family", "ladder", "--n", "20", "--a", "1", "--b", "1", "--mode", "machine", "--digits",
        "8", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let tau_ratio = v["ratios"]["tau"].as_str().unwrap();
    // 105284865781/1971566979888 = 0.0534017...
    assert!(tau_ratio.starts_with("0.053401"), "{tau_ratio}");
}

#[test]
fn bigfloat_mode_requires_18_digits() {
    let out = pmg(&[
        "family", "circle", "--length", "1", "--mode", "bigfloat", "--digits", "12",
    ]);
    assert_eq!(out.status.code(), Some(4));

    let out = pmg(&[
        "family", "circle", "--length", "1", "--mode", "bigfloat", "--digits", "24", "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // 1/12 to 24 significant figures
    assert_eq!(v["tau"].as_str().unwrap(), "0.0833333333333333333333333");
}

#[test]
fn exit_code_4_when_residual_exceeds_tolerance() {
    // an impossible tolerance forces the precision-loss path
    let out = pmg(&[
        "family",
        "ladder",
        "--n",
        "4",
        "--a",
        "1",
        "--b",
        "1",
        "--mode",
        "machine",
        "--tolerance",
        "1e-30",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("precision loss"), "{stderr}");
    // report still emitted for inspection
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision"]["flagged"], true);
}

#[test]
fn check_reports_genus() {
    let path = write_doc("k4c.json", K4);
    let out = pmg(&["check", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["g"], 3);
    assert_eq!(v["gbar"], 3);
}

#[test]
fn exit_code_2_on_validation_failure() {
    let doc = r#"{"vertices":[{"id":"a"},{"id":"b"}],
                  "edges":[{"u":"a","v":"b","length":"1"}]}"#;
    let path = write_doc("tree.json", doc);
    let out = pmg(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = pmg(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let zero = r#"{"vertices":[{"id":"a","q":1},{"id":"b","q":1}],
                   "edges":[{"u":"a","v":"b","length":"0"}]}"#;
    let path = write_doc("zero.json", zero);
    let out = pmg(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_code_3_on_parse_failure() {
    let path = write_doc("broken.json", "{ not json");
    let out = pmg(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = pmg(&["check", "--input", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_output_mentions_all_invariants() {
    let path = write_doc("k4t.json", K4);
    let out = pmg(&[
        "compute",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "table",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["tau", "theta", "phi", "lambda", "epsilon", "z"] {
        assert!(text.contains(name), "missing {name} in table:\n{text}");
    }
}
