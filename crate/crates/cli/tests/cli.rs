use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kaleido(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kaleido"))
        .args(args)
        .env_remove("KALEIDO_CATALOG")
        .output()
        .expect("spawn kaleido")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// A KDF over F_37 written by the parametric search.
fn kdf37(dir: &TempDir) -> std::path::PathBuf {
    let out = dir.path().join("k37.json");
    let o = kaleido(&["search", "parametric", "--q", "37", "--form", "fano-affine", "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["x"], 13);
    out
}

#[test]
fn verify_block_exit_codes() {
    assert_eq!(code(&kaleido(&["verify", "block", "--q", "37", "--x", "13"])), 0);
    assert_eq!(code(&kaleido(&["verify", "block", "--q", "13", "--x", "5"])), 1);
    let o = kaleido(&["verify", "block", "--q", "25", "--modulus=-3,0,1", "--x", "4+t", "--form", "fano-powers"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&kaleido(&["verify", "block", "--q", "12", "--x", "1"])), 2);
}

#[test]
fn search_then_verify_and_develop() {
    let dir = TempDir::new().unwrap();
    let k = kdf37(&dir);
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&k)])), 0);

    let o = kaleido(&["develop", "--file", s(&k)]);
    assert_eq!(code(&o), 0);
    let kal = dir.path().join("kal.json");
    fs::write(&kal, &o.stdout).unwrap();
    assert_eq!(code(&kaleido(&["verify", "kaleidoscope", "--file", s(&kal)])), 0);
}

#[test]
fn tampered_kdf_is_invalid() {
    let dir = TempDir::new().unwrap();
    let k = kdf37(&dir);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&k).unwrap()).unwrap();
    v["blocks"][0][3] = Value::from(5);
    fs::write(&k, v.to_string()).unwrap();
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&k)])), 1);
}

#[test]
fn malformed_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{").unwrap();
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&bad)])), 2);
    fs::write(&bad, r#"{"schema": "fano"}"#).unwrap();
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&bad)])), 2);
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&missing)])), 2);
}

#[test]
fn initial_search_fills_gaps_in_the_parametric_forms() {
    assert_eq!(code(&kaleido(&["search", "parametric", "--q", "19", "--form", "fano-affine"])), 1);
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("k19.json");
    assert_eq!(code(&kaleido(&["search", "initial", "--q", "19", "--out", s(&out)])), 0);
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&out)])), 0);
}

#[test]
fn nonexistence_and_reproduce() {
    let o = kaleido(&["nonexistence", "--v", "13"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["solutions"], 0);
    assert_eq!(code(&kaleido(&["nonexistence", "--v", "7"])), 0);
    assert_eq!(code(&kaleido(&["nonexistence", "--v", "13", "--schema", "hesse"])), 2);
    assert_eq!(code(&kaleido(&["reproduce", "fano-2a-alt"])), 0);
    assert_eq!(code(&kaleido(&["reproduce", "no-such-table"])), 2);
}

#[test]
fn compose_then_verify() {
    let dir = TempDir::new().unwrap();
    let k = kdf37(&dir);
    let o = kaleido(&["compose", "kdf", "--left", s(&k), "--right", s(&k)]);
    assert_eq!(code(&o), 0);
    let c = dir.path().join("c.json");
    fs::write(&c, &o.stdout).unwrap();
    assert_eq!(code(&kaleido(&["verify", "kdf", "--file", s(&c)])), 0);

    let o = kaleido(&["compose", "dm", "--q", "37", "--k", "7"]);
    assert_eq!(code(&o), 0);
    let dm = dir.path().join("dm.json");
    fs::write(&dm, &o.stdout).unwrap();
    assert_eq!(code(&kaleido(&["verify", "dm", "--file", s(&dm)])), 0);
}

#[test]
fn output_is_byte_stable() {
    let dir = TempDir::new().unwrap();
    let k = kdf37(&dir);
    let first = fs::read(&k).unwrap();
    let o = kaleido(&["compose", "dm", "--q", "37", "--k", "7"]);
    let again = kaleido(&["compose", "dm", "--q", "37", "--k", "7"]);
    assert_eq!(o.stdout, again.stdout);

    let cat = dir.path().join("cat");
    assert_eq!(code(&kaleido(&["--catalog", s(&cat), "catalog", "add", "--file", s(&k)])), 0);
    assert_eq!(fs::read(cat.join("k37_fano.json")).unwrap(), first);
}

#[test]
fn catalog_flag_overrides_environment() {
    let dir = TempDir::new().unwrap();
    let k = kdf37(&dir);
    let (env_cat, flag_cat) = (dir.path().join("env"), dir.path().join("flag"));

    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_kaleido"))
            .args(args)
            .env("KALEIDO_CATALOG", &env_cat)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run(&["catalog", "add", "--file", s(&k)])), 0);
    assert!(env_cat.join("k37_fano.json").exists());

    assert_eq!(code(&run(&["--catalog", s(&flag_cat), "catalog", "add", "--file", s(&k)])), 0);
    assert!(flag_cat.join("k37_fano.json").exists());

    let listed = json(&run(&["catalog", "list"]));
    assert_eq!(listed.as_array().unwrap().len(), 1);
    assert_eq!(listed[0]["valid"], true);

    assert_eq!(code(&run(&["catalog", "get", "--order", "37"])), 0);
    assert_eq!(code(&run(&["catalog", "get", "--order", "43"])), 1);

    // Corrupt the stored copy; reading re-verifies unless told not to.
    let stored = env_cat.join("k37_fano.json");
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&stored).unwrap()).unwrap();
    v["blocks"][0][3] = Value::from(5);
    fs::write(&stored, v.to_string()).unwrap();
    assert_eq!(code(&run(&["catalog", "get", "--order", "37"])), 1);
    assert_eq!(code(&run(&["catalog", "get", "--order", "37", "--no-verify"])), 0);
}

#[test]
fn bad_file_is_rejected_by_catalog() {
    let dir = TempDir::new().unwrap();
    let k = kdf37(&dir);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&k).unwrap()).unwrap();
    v["blocks"][0][3] = Value::from(5);
    fs::write(&k, v.to_string()).unwrap();
    let cat = dir.path().join("cat");
    assert_eq!(code(&kaleido(&["--catalog", s(&cat), "catalog", "add", "--file", s(&k)])), 1);
    assert!(!cat.join("k37_fano.json").exists());
}
