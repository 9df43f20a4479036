use serde_json::Value;
use std::path::Path;
use std::process::Command;

fn psk(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_psk")).args(args).env_remove("PSK_MAX_SIZE").output().expect("runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8"))
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const CHAIN3: &str = r#"{"kind":"frame","sig":"sim","n":2,"leq":[[1,1],[0,1]],"mod":[[0,1],[0,0]]}"#;
const CHAIN2: &str = r#"{"kind":"frame","sig":"sim","n":1,"leq":[[1]],"mod":[[0]]}"#;

#[test]
fn documented_invocations() {
    let dir = tempfile::tempdir().unwrap();
    let ch3 = write(dir.path(), "ch3.json", CHAIN3);
    let ch2 = write(dir.path(), "ch2.json", CHAIN2);
    assert_eq!(psk(&["validate", "--class", "fronton", &ch3]).0, 0);
    let (code, out) = psk(&["check", "--algebra", &ch2, "--rule", "/ p"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["countermodel"]["p"], 0);
    let (code, out) = psk(&["verify", "--suite", "rho-sigma", "--max-size", "4"]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["passed"], true);
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"kind":"frame","sig":"clm","n":2,"mod":[[0,1]]}"#);
    assert_eq!(psk(&["complex", &bad]).0, 2);
    assert_eq!(psk(&["complex", "/nonexistent/file.json"]).0, 2);
    assert_eq!(psk(&["no-such-command"]).0, 2);
    let ch2 = write(dir.path(), "ch2.json", CHAIN2);
    assert_eq!(psk(&["check", "--algebra", &ch2, "--rule", "/ p &"]).0, 2);
    assert_eq!(psk(&["eval", "--algebra", &ch2, "--formula", "p", "--valuation", r#"{"p": 7}"#]).0, 2);
    assert_eq!(psk(&["verify", "--suite", "no-such-suite"]).0, 2);
}

#[test]
fn scr_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let ch3 = write(dir.path(), "ch3.json", CHAIN3);
    let (code, scr) = psk(&["scr-build", "--algebra", &ch3, "--domains", r#"{"box":[0]}"#]);
    assert_eq!(code, 0);
    let scr = write(dir.path(), "scr.json", &scr);
    let (code, out) = psk(&["scr-refute", "--algebra", &ch3, "--scr", &scr]);
    assert_eq!(code, 1);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["refuted"], true);
    let (code, out) = psk(&["classicize", &scr]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["algebra"]["n"], 4);
}

#[test]
fn enumerate_emits_json_lines() {
    let (code, out) = psk(&["enumerate", "--kind", "km-frame", "--size", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
    for line in out.lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
    let (_, posets) = psk(&["enumerate", "--kind", "poset", "--size", "4"]);
    assert_eq!(posets.lines().count(), 16);
    let out = Command::new(env!("CARGO_BIN_EXE_psk"))
        .args(["enumerate", "--kind", "poset", "--size", "4"])
        .env("PSK_MAX_SIZE", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let a = psk(&["rewrite", "--rule", "/ (p -> q) | (q -> p)", "--budget", "8"]);
    let b = psk(&["rewrite", "--rule", "/ (p -> q) | (q -> p)", "--budget", "8"]);
    assert_eq!(a, b);
    let single = Command::new(env!("CARGO_BIN_EXE_psk"))
        .args(["rewrite", "--rule", "/ (p -> q) | (q -> p)", "--budget", "8"])
        .env("PSK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(single.stdout).unwrap(), a.1);
}

#[test]
fn frontier_and_classes() {
    let dir = tempfile::tempdir().unwrap();
    let chain = write(dir.path(), "gl2.json", r#"{"kind":"frame","sig":"clm","n":2,"mod":[[0,1],[0,0]]}"#);
    let (_, out) = psk(&["frame-class", &chain]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["K4"].clone(), v["K4Grz"].clone(), v["GL"].clone()), (Value::Bool(true), Value::Bool(true), Value::Bool(true)));
    let (_, out) = psk(&["frontier", &chain, "--set", "0,1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["max"], serde_json::json!([1]));
    let (code, out) = psk(&["translate", "--formula", "[m]p"]);
    assert_eq!(code, 0);
    assert!(out.contains("[]([]p & p)"), "{out}");
}
