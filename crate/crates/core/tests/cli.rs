use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn sumprod(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("SUMPROD_CACHE")
        .output()
        .expect("run sumprod")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn table1_rows_and_determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let o1 = sumprod(a.path(), &["table1"]);
    let o2 = sumprod(b.path(), &["table1"]);
    assert_eq!(o1.status.code(), Some(0));
    let text = stdout(&o1);
    assert!(text.contains("6 | {1,2,3,4,6,8} | 13 | 15"), "{text}");
    assert!(text.contains("9 | {1,2,3,4,6,8,9,12,16} | 25 | 25"), "{text}");
    assert_eq!(o1.stdout, o2.stdout);
    let c1 = fs::read(a.path().join("table1.csv")).unwrap();
    assert_eq!(c1, fs::read(b.path().join("table1.csv")).unwrap());
    assert_eq!(String::from_utf8(c1).unwrap().lines().count(), 7);
}

#[test]
fn manifest_lists_outputs_with_hashes() {
    let d = tempfile::tempdir().unwrap();
    sumprod(d.path(), &["chains", "--k", "5"]);
    let m = manifest(d.path());
    let outputs = m["outputs"].as_array().unwrap();
    assert_eq!(outputs.len(), 15 + 1);
    for f in outputs {
        let bytes = fs::read(d.path().join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), hex::encode(Sha256::digest(&bytes)));
    }
    assert_eq!(m["exit_code"], 0);
    assert!(m["tool_version"].is_string());
    assert!(m["wall_time_ms"].is_number());
    assert!(m["input_hashes"]["parameters"].is_string());
    assert_eq!(m["command_line"][3], "chains");
}

#[test]
fn all_chain_cases() {
    let d = tempfile::tempdir().unwrap();
    let o = sumprod(d.path(), &["chains", "--k", "4..7"]);
    assert_eq!(o.status.code(), Some(0));
    let dots = fs::read_dir(d.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "dot"))
        .count();
    assert_eq!(dots, 285);
    let summary: Value = serde_json::from_str(&fs::read_to_string(d.path().join("chains_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["total_cases"], 285);
    assert_eq!(summary["all_pass"], true);
}

#[test]
fn single_case_diagram() {
    let d = tempfile::tempdir().unwrap();
    let o = sumprod(d.path(), &["chains", "--k", "6", "--case", "Ã=0,4,5,6,7,8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let name = &manifest(d.path())["outputs"][0]["path"];
    let dot = fs::read_to_string(d.path().join(name.as_str().unwrap())).unwrap();
    assert!(dot.starts_with("digraph"));
    for node in ["\"(0,0)\"", "\"(11,28)\"", "\"(14,49)\"", "\"(16,64)\""] {
        assert!(dot.contains(node), "{node}");
    }
    let o = sumprod(d.path(), &["chains", "--k", "6", "--case", "0,4,5,6,7,8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let again = fs::read_to_string(d.path().join(name.as_str().unwrap())).unwrap();
    assert_eq!(dot, again);
}

#[test]
fn usage_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    for args in [
        &["chains", "--k", "8"][..],
        &["freiman", "--side", "sum", "--k", "3", "--N", "8"],
        &["sp", "--k", "11"],
        &["sp", "--k", "1"],
        &["gp", "bounds", "--k", "8", "--r", "1/2"],
        &["gp", "families", "--r", "2", "--z", "0.5", "--kind", "I"],
        &["gp", "families", "--r", "2", "--z", "4", "--kind", "I"],
        &["gp", "breakdown", "--x", "1", "--y", "4", "--r", "2", "--m", "3", "--n", "2"],
        &["nonsense"],
    ] {
        assert_eq!(sumprod(d.path(), args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_exits_3() {
    let d = tempfile::tempdir().unwrap();
    let blocker = d.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = sumprod(&blocker.join("sub"), &["table1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn budget_exits_4() {
    let d = tempfile::tempdir().unwrap();
    let o = sumprod(d.path(), &["freiman", "--side", "sum", "--k", "7", "--N", "20", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("partial"));
}

#[test]
fn gp_subcommands() {
    let d = tempfile::tempdir().unwrap();
    let o = sumprod(d.path(), &["gp", "breakdown", "--x", "1", "--y", "2", "--r", "3", "--m", "4", "--n", "4"]);
    assert!(stdout(&o).contains("(B+B)∩(C+C) = {4,12,36}"));
    let o = sumprod(d.path(), &["gp", "bounds", "--k", "8", "--r", "2"]);
    assert!(stdout(&o).contains("selected 22"));
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("gp_bounds.json")).unwrap()).unwrap();
    assert_eq!(v["selected"], 22);
    let o = sumprod(d.path(), &["gp", "families", "--r", "2", "--z", "3", "--kind", "I", "--window", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(d.path().join("gp_families.json")).unwrap()).unwrap();
    assert!(v["solutions"].as_array().unwrap().len() >= 2);
}

#[test]
fn freiman_small_runs() {
    let d = tempfile::tempdir().unwrap();
    for (k, n) in [("5", "12"), ("4", "10")] {
        let o = sumprod(d.path(), &["freiman", "--side", "sum", "--k", k, "--N", n]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains(" 0 violations"));
    }
    let o = sumprod(d.path(), &["freiman", "--side", "prod", "--k", "4", "--N", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn sp_certificates_and_cache() {
    let d = tempfile::tempdir().unwrap();
    let cache = d.path().join("cache");
    let run = |args: &[&str], env: Option<&Path>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_sumprod"));
        c.arg("--out").arg(d.path()).args(args).env_remove("SUMPROD_CACHE");
        if let Some(p) = env {
            c.env("SUMPROD_CACHE", p);
        }
        c.output().unwrap()
    };
    let o = run(&["sp", "--k", "7", "--M", "20"], Some(&cache));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("claimed 18"));
    assert!(cache.join("upper_k7_M20.json").exists());
    let first = fs::read(d.path().join("sp_k7_M20.json")).unwrap();
    let o = run(&["sp", "--k", "7", "--M", "20", "--cache-dir", "/nonexistent/ignored"], Some(&cache));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first, fs::read(d.path().join("sp_k7_M20.json")).unwrap());
    let cert: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(cert["lower"]["mode"], "chains");
    assert_eq!(cert["upper"]["M"], 20);

    let o = run(&["sp", "--k", "10"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("upper bound 30, lower bound open"), "{}", stdout(&o));
}
