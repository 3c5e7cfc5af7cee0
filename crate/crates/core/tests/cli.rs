use std::fs;
use std::process::{Command, Output};

fn smallgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smallgen")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const EXAMPLE: [&str; 6] = ["--q", "3", "--m", "2", "--f", "x^5+1"];

fn with<'a>(cmd: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend(EXAMPLE);
    v.extend(extra);
    v
}

#[test]
fn analyze_reports_genus() {
    let o = smallgen(&with("analyze", &[]));
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["genus"], 2);
    assert_eq!(doc["identity_holds"], true);
}

#[test]
fn generator_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let p = path.to_str().unwrap();
    let o = smallgen(&with("generator", &["--workers", "2", "--out", p]));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read(&path).unwrap(), o.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["height"], "3/2");
    assert_eq!(doc["rung"], "primary");

    let v = smallgen(&["verify", p]);
    assert_eq!(code(&v), 0);
    assert!(String::from_utf8_lossy(&v.stdout).lines().all(|l| l.starts_with("ok")));

    let tampered = String::from_utf8(o.stdout.clone()).unwrap().replacen("\"height\": \"3/2\"", "\"height\": \"1/1\"", 1);
    fs::write(&path, tampered).unwrap();
    let v = smallgen(&["verify", p]);
    assert_eq!(code(&v), 1);
    assert!(String::from_utf8_lossy(&v.stdout).contains("FAIL height"));

    fs::write(&path, &o.stdout[..o.stdout.len() / 2]).unwrap();
    assert_eq!(code(&smallgen(&["verify", p])), 2);
}

#[test]
fn places_rows() {
    let o = smallgen(&with("places", &["--l", "2"]));
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["total"], 4);
    assert!(rows.iter().all(|r| r["weil_total_ok"] == true));
}

#[test]
fn oracle_agrees() {
    let o = smallgen(&with("oracle", &["--l", "2", "--rr-max", "2"]));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(doc.as_array().unwrap().iter().all(|r| r["matches"] == true));
}

#[test]
fn input_errors() {
    assert_eq!(code(&smallgen(&["analyze", "--q", "3", "--m", "3", "--f", "x^5+1"])), 2);
    assert_eq!(code(&smallgen(&["analyze", "--q", "3", "--m", "2", "--f", "x^5+"])), 2);
    assert_eq!(code(&smallgen(&["analyze", "--q", "6", "--m", "2", "--f", "x^5+1"])), 2);
    assert_eq!(code(&smallgen(&with("places", &["--l", "0"]))), 2);
    assert_eq!(code(&smallgen(&["verify", "/nonexistent/cert.json"])), 2);
}

#[test]
fn exhausted_and_capped() {
    let o = smallgen(&["generator", "--q", "3", "--m", "2", "--f", "x^3+2*x+2", "--delta", "0"]);
    assert_eq!(code(&o), 3);
    assert_eq!(code(&smallgen(&with("places", &["--l", "40"]))), 4);
}
