use std::process::{Command, Output};

fn pf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pf")).args(args).output().expect("run pf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_catalog_passes_every_entry() {
    let o = pf(&["verify-catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 25);
}

#[test]
fn malformed_operator_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.json", "{\"form\": \"theta\", \"coeffs\": [[\"1\"");
    assert_eq!(pf(&["symbol", &bad]).status.code(), Some(2));
    assert_eq!(pf(&["symbol", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(pf(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn reproduce_prints_trace() {
    let o = pf(&["reproduce", "98toA"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("descend"));
    assert!(s.contains("-1/16"));
    assert!(s.trim_end().ends_with("operators equal"));
    assert_eq!(pf(&["reproduce", "nope"]).status.code(), Some(2));
}

#[test]
fn symbol_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let op = write(&dir, "op.json", r#"{"form": "theta", "coeffs": [["0", "0", "1"], ["-4", "-16", "-16"]]}"#);
    let o = pf(&["--json", "symbol", &op]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let pts = v["points"].as_array().unwrap();
    let at = |p: &str| pts.iter().find(|e| e["point"] == p).unwrap()["exponents"].clone();
    assert_eq!(at("1/16"), serde_json::json!(["0", "0"]));
    assert_eq!(at("∞"), serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn transform_mobius_gives_partner() {
    let o = pf(&["--json", "transform", "catalog:33", "--mobius", "-1,0,0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let got = octic_pf::optheta::OperatorJson::parse(&stdout(&o)).unwrap().to_theta().unwrap();
    let want = octic_pf::catalog::catalog().arrangement(70).unwrap().operator().unwrap();
    assert!(got.same_as(&want));
}

#[test]
fn period_then_guess() {
    let dir = tempfile::tempdir().unwrap();
    // P = 1 + t: A_i are the coefficients of (1 + t)^(-1/2).
    let poly = write(&dir, "p.json", r#"{"0,0,0,0": "1", "0,0,0,1": "1"}"#);
    let o = pf(&["period", "--poly", &poly, "--terms", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["A"][1], "-1/2");
    let series = write(&dir, "s.json", &stdout(&o));
    let o = pf(&["guess", "--series", &series, "--max-order", "1", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains('Θ'));
}

#[test]
fn guess_without_solution_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let s: Vec<String> = (0..20).map(|n: i64| ((n * n * 7 + 3) % 11 - 5).to_string()).collect();
    let series = write(&dir, "s.json", &serde_json::to_string(&s).unwrap());
    let o = pf(&["guess", "--series", &series, "--max-order", "1", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn qexp_and_count() {
    let o = pf(&["--json", "qexp", "--form", "8/1", "--terms", "24"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coeffs"][23], "-56");
    assert_eq!(pf(&["verify-forms"]).status.code(), Some(0));
    let o = pf(&["count", "--arrangement", "69", "--prime", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim().parse::<u64>().is_ok());
    assert_eq!(pf(&["count", "--arrangement", "69", "--prime", "4"]).status.code(), Some(2));
}

#[test]
fn catalog_dump_roundtrips() {
    let o = pf(&["catalog", "dump"]);
    assert_eq!(o.status.code(), Some(0));
    let c = octic_pf::catalog::Catalog::from_json(&stdout(&o)).unwrap();
    assert_eq!(&c, octic_pf::catalog::catalog());
}
