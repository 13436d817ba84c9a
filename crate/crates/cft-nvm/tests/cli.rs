use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cft-nvm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn field_command() {
    let v = json(&["field", "--q", "7"]);
    assert_eq!(v["modulus_text"], "x");
    assert_eq!(v["generator"], 3);
    let v = json(&["field", "--q", "4"]);
    assert_eq!(v["modulus_text"], "x^2 + x + 1");
    assert_eq!(v["modulus"], serde_json::json!([1, 1, 1]));
    assert_eq!(json(&["field", "--p", "2", "--m", "2"]), v);
    let out = run(&["field", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not a prime power"));
    assert_eq!(run(&["field", "--q", "9", "--p", "3", "--m", "1"]).status.code(), Some(2));
    assert_eq!(run(&["field"]).status.code(), Some(2));
}

#[test]
fn gauss_command() {
    let v = json(&["gauss", "--q", "7", "--index", "3", "--chi", "1"]);
    let sums = v["gauss_sums"].as_array().unwrap();
    assert_eq!(sums.len(), 3);
    for g in sums {
        assert_eq!(g["norm_is_q"], true);
        let (re, im) = (g["approx"]["re"].as_f64().unwrap(), g["approx"]["im"].as_f64().unwrap());
        assert!((re * re + im * im - 7.0).abs() < 1e-9);
        assert!(g["exact"]["coeffs"].is_array());
    }
    assert_eq!(v["t_sums"].as_array().unwrap().len(), 3);

    let v = json(&["gauss", "--q", "7", "--index", "6", "--chi", "0"]);
    let trivial = &v["gauss_sums"][0];
    assert_eq!(trivial["character"]["k"], 0);
    assert_eq!(trivial["exact"]["coeffs"][0], "-1");
    assert!(v.get("t_sums").is_none());

    let out = run(&["gauss", "--q", "8", "--index", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("does not divide"));
    assert_eq!(run(&["gauss", "--q", "7", "--index", "3", "--chi", "2"]).status.code(), Some(2));
}

#[test]
fn cft_command() {
    let v = json(&["cft", "--q", "13", "--index", "3", "--chi", "0"]);
    assert_eq!(v["R"].as_array().unwrap().len(), 4);
    assert_eq!(v["R"], v["S"]);
    let corner = v["entries"][0][0]["coeffs"].as_array().unwrap();
    assert_eq!(corner[0], "4");
    assert!(corner[1..].iter().all(|c| c == "0"));
    let out = run(&["--format", "csv", "cft", "--q", "7", "--index", "3", "--chi", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("s,r,exact,re,im\n"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn nvm_command() {
    let v = json(&["nvm", "--q", "7", "--index", "3", "--chi", "1", "--method", "both"]);
    assert_eq!(v["agreement"], true);
    assert_eq!(v["holds"], true);
    let v = json(&["nvm", "--q", "4", "--index", "3", "--chi", "0", "--method", "brute"]);
    assert_eq!(v["holds"], false);
    assert_eq!(v["theorem_prediction"], Value::Null);
    assert!(v["witness"]["I"].is_array());
    let v = json(&["nvm", "--q", "19", "--index", "3", "--chi", "2", "--method", "theorem"]);
    assert_eq!(v["minors_checked"], 0);
    let out = run(&["nvm", "--q", "13", "--index", "4", "--chi", "1", "--method", "theorem"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("criterion"));
    assert_eq!(run(&["nvm", "--q", "7", "--index", "3", "--method", "guess"]).status.code(), Some(2));
}

#[test]
fn chebotarev_command() {
    let v = json(&["chebotarev", "--p", "7"]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["minors_checked"], 3432);
    assert_eq!(run(&["chebotarev", "--p", "9"]).status.code(), Some(2));
}

#[test]
fn scan_command() {
    let out = run(&["scan", "--q-max", "100", "--index", "3", "--chars", "nontrivial"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("disagreements=0"));
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.iter().all(|r| r["agreement"] == true));

    let out = run(&["scan", "--q-max", "100", "--index", "3", "--chars", "trivial"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        let q = r["q"].as_u64().unwrap();
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        assert_eq!(r["holds"], p % 3 == 1, "q={q}");
    }

    let out = run(&["--format", "csv", "scan", "--q-max", "20", "--index", "2", "--chars", "nontrivial"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[3], "brute");
        assert_eq!(&rec[5], "");
    }
}

#[test]
fn scan_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let out = run(&["scan", "--q-max", "16", "--index", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 12);
    let bad = dir.path().join("missing").join("r.jsonl");
    let out = run(&["scan", "--q-max", "16", "--index", "3", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["scan", "--q-max", "1000", "--index", "3"]).status.code(), Some(2));
}

#[test]
fn witness_command() {
    let v = json(&["witness", "--q", "4", "--index", "3", "--chi", "0"]);
    assert_eq!(v["holds"], false);
    let u = &v["uncertainty"];
    assert!(u["total"].as_u64().unwrap() < u["bound"].as_u64().unwrap());
    assert_eq!(v["f"].as_array().unwrap().len(), 4);
    let v = json(&["witness", "--q", "7", "--index", "3", "--chi", "1"]);
    assert_eq!(v["message"], "NVM holds");
    let out = run(&["--format", "table", "witness", "--q", "5", "--index", "1", "--chi", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "NVM holds\n");
}

#[test]
fn output_is_identical_across_threads() {
    let a = run(&["--threads", "1", "scan", "--q-max", "40", "--index", "2"]);
    let b = run(&["--threads", "4", "scan", "--q-max", "40", "--index", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    for args in [&["gauss", "--q", "13", "--index", "3", "--chi", "1"][..], &["witness", "--q", "16", "--index", "3"]] {
        let one = run(&[&["--threads", "1"][..], args].concat());
        let four = run(&[&["--threads", "4"][..], args].concat());
        assert_eq!(one.stdout, four.stdout);
    }
}

#[test]
fn max_order_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_cft-nvm"))
        .env("CFT_NVM_MAX_ORDER", "10")
        .args(["gauss", "--q", "7", "--index", "3", "--chi", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cft-nvm"))
        .env("CFT_NVM_MAX_ORDER", "zero")
        .args(["field", "--q", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_cft-nvm"))
        .env("CFT_NVM_MAX_ORDER", "100")
        .args(["gauss", "--q", "7", "--index", "3", "--chi", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn help_and_usage() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
