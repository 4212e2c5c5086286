use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_apfive"))
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let Output { status, stdout, stderr } = bin().args(args).output().unwrap();
    let json = serde_json::from_slice(&stdout).unwrap_or(Value::Null);
    (status.code().unwrap(), json, String::from_utf8_lossy(&stderr).into_owned())
}

fn fixture_dir() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for level in [70, 350] {
        let name = format!("level_{level}.json");
        std::fs::copy(data_dir().join(&name), dir.path().join(&name)).unwrap();
    }
    dir
}

#[test]
fn kraus_prints_trace_set() {
    let (code, v, _) = run(&["kraus", "--n", "11", "--p", "23", "--kappa", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["traces"], serde_json::json!([]));
    let (code, v, _) = run(&["kraus", "--n", "7", "--p", "29", "--kappa", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["residues"].as_array().unwrap().len(), 4);
}

#[test]
fn kraus_rejects_bad_kappa() {
    let (code, _, err) = run(&["kraus", "--n", "11", "--p", "89", "--kappa", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("kappa"));
}

#[test]
fn validate_exit_codes() {
    let dir = fixture_dir();
    let d = dir.path().to_str().unwrap();
    let (code, v, _) = run(&["validate", "--data", d, "--levels", "70,350"]);
    assert_eq!(code, 0);
    assert_eq!(v["ok"], serde_json::json!(true));
    // levels without files are a data error
    let (code, _, err) = run(&["validate", "--data", d]);
    assert_eq!(code, 2);
    assert!(err.contains("no data for level"));
    // a wrong count is a mismatch
    let text = std::fs::read_to_string(dir.path().join("level_70.json")).unwrap().replace("\"level\":70", "\"level\":350");
    let other = tempfile::tempdir().unwrap();
    std::fs::write(other.path().join("level_350.json"), text).unwrap();
    let (code, _, _) = run(&["validate", "--data", other.path().to_str().unwrap(), "--levels", "350"]);
    assert_eq!(code, 1);
}

#[test]
fn validate_reports_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("level_70.json"), "{\"level\":70,\"weight\":2,\"classes\":[}\n").unwrap();
    let (code, _, err) = run(&["validate", "--data", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("schema error"), "{err}");
}

#[test]
fn eliminate_with_toml_config() {
    let dir = fixture_dir();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("report.json");
    std::fs::write(
        &cfg,
        format!(
            "data_dir = {:?}\nlevels = [70, 350]\n\n[stage3]\n7 = [29, 43]\n11 = [23, 89]\n13 = [53, 79, 157]\n",
            dir.path().to_str().unwrap()
        ),
    )
    .unwrap();
    let (code, _, err) = run(&["eliminate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["stage2"]["counts"]["7"]["350"], serde_json::json!(2));
    assert_eq!(report["final_survivors"], serde_json::json!([]));
    assert!(err.contains("PASS final survivors"));
}

#[test]
fn eliminate_config_errors() {
    let dir = fixture_dir();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "levels = [70]\n[stage3]\n11 = [29]\n").unwrap();
    let (code, _, err) = run(&["eliminate", "--data", dir.path().to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("1 mod 11"), "{err}");
    std::fs::write(&cfg, "levels = [70]\nunknown_key = 1\n").unwrap();
    let (code, _, _) = run(&["eliminate", "--data", dir.path().to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2);
    // default levels include ones the directory lacks
    let (code, _, err) = run(&["eliminate", "--data", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("8960"));
}

#[test]
fn search_finds_the_known_families() {
    let (code, v, _) = run(&["search", "--box", "10", "--nmax", "7"]);
    assert_eq!(code, 0);
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 4 + 2 * 6);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 4);
    assert_eq!(v["three_divides_y"], serde_json::json!(true));
}

#[test]
fn verify_small_cases() {
    for case in ["n2", "n3", "n5"] {
        let (code, v, err) = run(&["verify-small", "--case", case]);
        assert_eq!(code, 0, "{case}: {err}");
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == serde_json::json!(true)));
    }
    let (code, _, _) = run(&["verify-small", "--case", "n4"]);
    assert_eq!(code, 2);
}

#[test]
fn fuzz_runs() {
    let (code, v, _) = run(&["fuzz", "--trials", "500", "--seed", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["identities"]["trials"], serde_json::json!(500));
    let (code, _, _) = run(&["fuzz", "--trials", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn fetch_failure_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run(&[
        "fetch",
        "--levels",
        "70",
        "--out",
        dir.path().to_str().unwrap(),
        "--base-url",
        "http://127.0.0.1:9/api",
        "--retries",
        "1",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("remote fetch failed"), "{err}");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
