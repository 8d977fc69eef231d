use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn frlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frlab"))
        .args(args)
        .current_dir(corpus())
        .env_remove("FRLAB_CORPUS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn kuzmin_example() {
    let out = frlab(&["kuzmin", "--n", "6", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), json!({"poly": [0, 0, 0, 0, 1]}));
}

#[test]
fn homology_example() {
    let out = frlab(&["homology", "--group", "c2c2.json", "--module", "trivial", "--degree", "2", "--coeff", "Z"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out), json!({"free_rank": 0, "torsion": [2]}));
}

#[test]
fn eval_example_refuses() {
    let out = frlab(&["eval", "--code", "r_2 f + f r_2", "--i", "1", "--ring", "Z", "--group", "c2c2.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["status"], "hypothesis_failed");
}

#[test]
fn eval_on_odd_group_gives_value() {
    let out = frlab(&["eval", "--code", "r_2 f + f r_2", "--i", "1", "--ring", "Z", "--group", "c3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_ne!(v["status"], "hypothesis_failed");
}

#[test]
fn other_commands() {
    let v = json_of(&frlab(&["parse", "--code", "f r + r f"]));
    assert_eq!(v["kind"], "ideal");
    let v = json_of(&frlab(&["translate", "--code", "r_3 f + f r_3"]));
    assert!(v["rules"].as_array().is_some_and(|r| !r.is_empty()));
    let v = json_of(&frlab(&["relmod", "--group", "c3", "--coinv", "Lie2"]));
    assert_eq!(v["hopf_h2"], json!({"free_rank": 0, "torsion": []}));
    let out = frlab(&["quotient", "--group", "c2c2", "--num", "r ∩ f f", "--den", "r f + f r", "--lmin", "3", "--lmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["value"], json!({"free_rank": 0, "torsion": [2]}));
    let v = json_of(&frlab(&["kuzmin", "--n", "3", "--p", "3", "--group", "c3", "--apply", "1"]));
    assert_eq!(v["group"], "c3");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(frlab(&["parse", "--code", "f +"]).status.code(), Some(2));
    assert_eq!(frlab(&["homology", "--group", "no_such_group", "--degree", "1"]).status.code(), Some(2));
    assert_eq!(frlab(&["kuzmin", "--n", "6", "--p", "4"]).status.code(), Some(2));
    assert_eq!(frlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn caps_exit_3() {
    let out = frlab(&["--max-group-order", "3", "homology", "--group", "c2c2", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = frlab(&["--max-bar-degree", "2", "homology", "--group", "c2", "--degree", "4", "--resolution", "bar"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("frlab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("frlab.toml");
    std::fs::write(&cfg, "format = \"table\"\n[caps]\nmax_group_order = 3\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = frlab(&["--config", cfg, "homology", "--group", "c2c2", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let out = frlab(&["--config", cfg, "--max-group-order", "64", "homology", "--group", "c2c2", "--degree", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "Z/2 + Z/2");
    let out = frlab(&["--config", cfg, "--format", "json", "--max-group-order", "64", "kuzmin", "--n", "2", "--p", "2"]);
    assert_eq!(json_of(&out), json!({"poly": [0, 0, 1]}));

    std::fs::write(dir.join("bad.toml"), "colour = 1\n").unwrap();
    let bad = dir.join("bad.toml");
    assert_eq!(frlab(&["--config", bad.to_str().unwrap(), "kuzmin", "--n", "2", "--p", "2"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn table_format() {
    let out = frlab(&["--format", "table", "relmod", "--group", "c2c2", "--coinv", "Ex2"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("hopf_h2") && l.ends_with("Z/2")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("coinvariants.Ex2")), "{text}");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-suite", "--quick", "--only", "kuzmin", "--only", "rules", "--only", "koszul"];
    let a = frlab(&args);
    let b = frlab(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
    let report = json_of(&a);
    assert_eq!(report["pass"], true);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c.get("runtime_ms").is_none()));
}

#[test]
fn verify_suite_reports_failures_with_exit_1() {
    // The saturation checks need c2c2 and c4, which this corpus lacks.
    let dir = std::env::temp_dir().join(format!("frlab-cli-corpus-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(corpus().join("c3.json"), dir.join("c3.json")).unwrap();
    let out = frlab(&["--corpus", dir.to_str().unwrap(), "verify-suite", "--quick", "--only", "saturation"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert_eq!(report["pass"], false);
    std::fs::remove_dir_all(&dir).ok();
}
