use std::process::{Command, Output};

use serde_json::Value;

fn hermcov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermcov")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_family_i() {
    let out = hermcov(&["construct", "--family", "I", "--p", "2", "--h", "3", "--b", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["results"][0];
    assert_eq!(r["genus"], 4);
    assert!(r["model"]["polynomial"].as_str().unwrap().contains("ξ^9"));
    assert_eq!(r["field"]["p"], 2);
    assert_eq!(r["field"]["modulus"].as_array().unwrap().len(), 12);
    assert!(r["version"].is_string());
}

#[test]
fn invalid_inputs_exit_2() {
    for args in [
        &["construct", "--family", "II", "--p", "2", "--h", "3", "--b", "2"][..],
        &["construct", "--family", "I", "--p", "2", "--h", "3", "--b", "1"],
        &["construct", "--family", "I", "--p", "4", "--h", "3", "--b", "2"],
        &["construct", "--family", "I", "--p", "2", "--h", "3", "--b", "8"],
        &["construct", "--family", "IV", "--p", "2", "--h", "3"],
        &["bogus"],
        &["verify", "--criterion", "11"],
        &["verify-lemma-b", "--p", "3", "--h", "2"],
        &["count", "--family", "III", "--p", "2", "--h", "2", "--k", "2"],
    ] {
        assert_eq!(hermcov(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn count_and_maximality() {
    let out = hermcov(&["count", "--family", "I", "--p", "2", "--h", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rs = v["results"].as_array().unwrap();
    assert_eq!(rs.len(), 6);
    for r in rs {
        assert_eq!(r["maximality"]["N"], 129);
        assert_eq!(r["maximality"]["genus"], 4);
        assert_eq!(r["maximality"]["maximal"], true);
    }
    let v = json(&hermcov(&["count", "--family", "III", "--p", "2", "--h", "3", "--limit", "2"]));
    let rs = v["results"].as_array().unwrap();
    assert_eq!(rs.len(), 2);
    assert!(rs.iter().all(|r| r["count"]["N"] == 161));
    assert_eq!(hermcov(&["count", "--family", "III", "--p", "2", "--h", "3", "--b", "0"]).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let args = ["aut", "--family", "II", "--p", "3", "--h", "2"];
    let a = hermcov(&args);
    let b = hermcov(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["results"][0]["report"]["psi_order"], 27);
    assert_eq!(v["results"][0]["report"]["total_order"], 54);
}

#[test]
fn groups_and_discrepancies() {
    let v = json(&hermcov(&["aut", "--family", "I", "--p", "2", "--h", "3"]));
    let r = &v["results"][0];
    assert_eq!(r["report"]["v_order"], 128);
    assert_eq!(r["report"]["w_order"], 1152);
    assert!(!r["discrepancies"].as_array().unwrap().is_empty());
    let v = json(&hermcov(&["aut", "--family", "hermitian", "--p", "2", "--h", "2"]));
    assert_eq!(v["results"][0]["report"]["order"], 320);
}

#[test]
fn iso_and_semigroups() {
    let out = hermcov(&["iso", "--family", "I", "--p", "2", "--h", "5", "--inventory"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["inventory"]["class_sizes"], serde_json::json!([6, 6, 6, 6, 6]));
    let v = json(&hermcov(&["semigroup", "--gens", "3,4,10"]));
    assert_eq!(v["results"][0]["telescopic_genus"]["l_g"], 5);
    assert_eq!(v["results"][0]["semigroup"]["genus"], 3);
}

#[test]
fn lemmas() {
    let v = json(&hermcov(&["verify-lemma-a", "--p", "2"]));
    assert_eq!(v["results"][0]["report"]["degree"], 22);
    let out = hermcov(&["verify-lemma-b", "--h", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_checks() {
    let out = hermcov(&["verify", "--criterion", "1", "--criterion", "9", "--p", "2", "--h", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rs = v["results"].as_array().unwrap();
    assert!(rs.iter().all(|r| r["checks"][0]["passed"] == true));
    assert!(rs[0]["elapsed_ms"].is_number());
    let out = hermcov(&["verify", "--criterion", "2", "--no-timing"]);
    assert!(json(&out)["results"][0].get("elapsed_ms").is_none());
}

#[test]
fn text_and_file_output() {
    let dir = std::env::temp_dir().join(format!("hermcov-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("field.json");
    let out = hermcov(&["field", "--p", "3", "--h", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["results"][0]["q"], 3);
    let out = hermcov(&["--format", "text", "genus", "--family", "I", "--p", "2", "--h", "3"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("genus=4"));
    std::fs::remove_dir_all(&dir).ok();
}
