use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cy3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cy3")).args(args).output().expect("binary runs")
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "structured"]);
    let out = cy3(&all);
    let v = serde_json::from_slice(&out.stdout).expect("structured output parses");
    (out.status.code().unwrap(), v)
}

fn stage<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["stages"].as_array().unwrap().iter().find(|s| s["check"] == name).unwrap_or_else(|| panic!("no stage {name}"))
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".cy3").tempfile().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn twogen_full_run() {
    let path = fixture("twogen.cy3");
    let (code, r) = structured(&["all", path.to_str().unwrap()]);
    for s in r["stages"].as_array().unwrap() {
        let expected = if s["check"] == "trivial_extension" { "fail" } else { "pass" };
        assert_eq!(s["status"], expected, "{}", s["check"]);
    }
    assert_eq!(code, 1);

    let mut terms: Vec<(String, String)> = stage(&r, "superpotential")["witness"]["superpotential"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t[0].as_str().unwrap().to_string(), t[1].as_str().unwrap().to_string()))
        .collect();
    terms.sort();
    let mut expected: Vec<(String, String)> = [
        ("yxz", "1"), ("zyx", "1"), ("xzy", "1"), ("xyz", "-1"), ("zxy", "-1"), ("yzx", "-1"),
        ("xxx", "-1"), ("yyy", "1"), ("xyx", "1"), ("xxy", "1"), ("yxx", "1"),
    ]
    .iter()
    .map(|(w, c)| (w.to_string(), c.to_string()))
    .collect();
    expected.sort();
    assert_eq!(terms, expected);
    assert_eq!(stage(&r, "hilbert")["witness"]["extension"]["dims"], serde_json::json!([1, 3, 6, 10, 15, 21, 28]));
    assert_eq!(stage(&r, "beilinson")["witness"]["total"], 15);
}

#[test]
fn zero_parameters_pass_every_stage() {
    let path = fixture("twogen.cy3");
    let (code, r) = structured(&["all", path.to_str().unwrap(), "--param", "a=0", "--param", "b=0", "--param", "c=0"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["parameters"]["b"], "0");
}

#[test]
fn smith_checks() {
    let path = fixture("smith.cy3");
    let p = path.to_str().unwrap();
    let (code, r) = structured(&["hilbert", p]);
    assert_eq!(code, 0);
    assert_eq!(stage(&r, "hilbert")["witness"]["extension"]["dims"], serde_json::json!([1, 7, 42, 246, 1435]));
    assert_eq!(stage(&r, "beilinson")["witness"]["total"], 59);

    let (code, r) = structured(&["cy-check", p]);
    assert_eq!(code, 0);
    assert_eq!(stage(&r, "calabi_yau")["witness"]["pairing_rank"], 7);

    let (code, r) = structured(&["coherence", p]);
    assert_eq!(code, 0);
    let w = &stage(&r, "coherence")["witness"];
    assert_eq!(w["quotient_dims"], serde_json::json!([1, 2, 3, 4, 5]));
    assert!(w["transport"].is_array());

    let (code, r) = structured(&["superpotential", p]);
    assert_eq!(code, 0);
    assert_eq!(stage(&r, "superpotential")["witness"]["superpotential"]["terms"].as_array().unwrap().len(), 42);

    let (code, r) = structured(&["reduce-standard", p]);
    assert_eq!(code, 0);
    assert_eq!(r["stages"].as_array().unwrap().len(), 2);
}

#[test]
fn structured_output_is_deterministic() {
    let path = fixture("twogen.cy3");
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        cy3(&["all", path.to_str().unwrap(), "--output", out.to_str().unwrap()]);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    // rationals are strings, never floats
    assert_eq!(stage(&v, "validation")["witness"]["matrix"], serde_json::json!([["0", "1"], ["-1", "0"]]));
}

#[test]
fn text_report_lists_stages() {
    let path = fixture("twogen.cy3");
    let out = cy3(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] validation"));
    assert!(text.contains("[PASS] delta_r"));
}

#[test]
fn delta_r_nonzero_stops_pipeline() {
    let f = write_temp("GENERATORS\nx y\nMATRIX\n0 1\n-1 0\nDERIVATION\n1 1 1 1\n");
    let (code, r) = structured(&["all", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    let d = stage(&r, "delta_r");
    assert_eq!(d["status"], "fail");
    // δ(r) = x(xy - yx) + (xy - yx)x: nonzero, but inside the ideal
    assert_eq!(d["witness"]["membership"]["member"], true);
    assert_eq!(d["witness"]["delta_r"]["rendered"], "xxy - yxx");
    assert_eq!(stage(&r, "hilbert")["status"], "skipped");
    assert!(stage(&r, "hilbert")["reason"].as_str().unwrap().contains("δ(r)"));
}

#[test]
fn input_errors_exit_two() {
    let f = write_temp("GENERATORS\nx y\nMATRIX\n0 1\n1 0\n");
    let out = cy3(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("anti-symmetry"));

    let f = write_temp("GENERATORS\nx y\nMATRIX\n0 1/0\n-1 0\n");
    let out = cy3(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4, column 3"));

    let out = cy3(&["validate", "/nonexistent/file.cy3"]);
    assert_eq!(out.status.code(), Some(2));

    let path = fixture("twogen.cy3");
    let out = cy3(&["validate", path.to_str().unwrap(), "--param", "a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_degree_overrides_file() {
    let path = fixture("twogen.cy3");
    let (_, r) = structured(&["hilbert", path.to_str().unwrap(), "--max-degree", "8"]);
    assert_eq!(r["bound"], 8);
    assert_eq!(stage(&r, "hilbert")["witness"]["extension"]["dims"], serde_json::json!([1, 3, 6, 10, 15, 21, 28, 36, 45]));
}

#[test]
fn bundled_files_match_library_fixtures() {
    use cy3_core::fixtures;
    use cy3_core::tensoralg::rat;
    let none = std::collections::BTreeMap::new();
    let text = std::fs::read_to_string(fixture("smith.cy3")).unwrap();
    let inst = cy3_cli::parse_presentation(&text).unwrap().instantiate(&none).unwrap();
    let f = fixtures::smith();
    assert_eq!(inst.presentation, f.presentation);
    assert_eq!(inst.derivation, f.derivation);

    let text = std::fs::read_to_string(fixture("twogen.cy3")).unwrap();
    let inst = cy3_cli::parse_presentation(&text).unwrap().instantiate(&none).unwrap();
    let f = fixtures::twogen(rat(1), rat(1), rat(1));
    assert_eq!(inst.presentation, f.presentation);
    assert_eq!(inst.derivation, f.derivation);
}
