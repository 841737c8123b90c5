use std::process::{Command, Output};

use serde_json::Value;

fn klein_lame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klein-lame"))
        .args(args)
        .env_remove("KLEIN_LAME_CONFIG")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn monodromy_of_harmonic_operator() {
    let out = klein_lame(&["monodromy", "--ell", "1/6", "--B", "0", "--g2", "4", "--g3", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["closureSize"], 24);
    assert_eq!(v["group"], "S4");
}

#[test]
fn closure_cap_from_config_env() {
    let dir = std::env::temp_dir().join(format!("klein-lame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("config.json");
    std::fs::write(&path, r#"{"closureCap": 10}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_klein-lame"))
        .args(["monodromy", "--ell", "1/6", "--B", "0", "--g2", "4", "--g3", "0"])
        .env("KLEIN_LAME_CONFIG", &path)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["group"], Value::Null);
}

#[test]
fn schwarz_lookup() {
    let out = klein_lame(&["schwarz", "--triple", "1/2,1/3,1/5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["group"], "A5");
    assert_eq!(klein_lame(&["schwarz", "--triple", "1/2,1/3,1/7"]).status.code(), Some(1));
}

#[test]
fn named_pullback_verifies() {
    let out = klein_lame(&["verify-pullback", "--named", "klein-caseXIV"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verified"], true);
}

#[test]
fn usage_errors_exit_two() {
    let out = klein_lame(&["classify", "--ell", "x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(klein_lame(&["bogus"]).status.code(), Some(2));
}

#[test]
fn instances_list_five() {
    let out = klein_lame(&["instances"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["instances"].as_array().map(Vec::len), Some(5));
}
