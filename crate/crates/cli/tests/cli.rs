use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

const SAME: &str = "((a,b)u1,(c,d)v1);\n((a,b)u2,(c,d)v2);\n";
const CONFLICT: &str = "((a,b)u1,(c,d)v1);\n((a,c)u2,(b,d)v2);\n";

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_treecompat"));
    cmd.env_remove("TREECOMPAT_LIMIT");
    cmd
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_compatible_profile() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "same.nwk", SAME);
    let out = run(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "compatible: (a,b,(c,d));\n");
}

#[test]
fn check_incompatible_profile() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "conflict.nwk", CONFLICT);
    let out = run(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "incompatible (16/16 fill subsets exhausted)\n");
}

#[test]
fn check_json_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "same.nwk", SAME);
    let a = run(&["check", "--json", p.to_str().unwrap()]);
    let b = run(&["check", "--json", p.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["compatible"], true);
    assert_eq!(v["fill"].as_array().unwrap().len(), 3);
    assert_eq!(v["embeddings"].as_array().unwrap().len(), 2);
}

#[test]
fn limit_flag_and_env() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "same.nwk", SAME);
    let out = run(&["check", "--limit", "2", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceed the limit"));

    let out = bin()
        .env("TREECOMPAT_LIMIT", "2")
        .args(["check", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .env("TREECOMPAT_LIMIT", "8")
        .args(["check", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.nwk", "((a,b);\n");
    assert_eq!(run(&["check", p.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.nwk");
    assert_eq!(run(&["check", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn supertree_to_file() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "same.nwk", SAME);
    let o = dir.path().join("out.nwk");
    let out = run(&["supertree", p.to_str().unwrap(), "-o", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&o).unwrap(), "(a,b,(c,d));\n");

    let c = write(&dir, "conflict.nwk", CONFLICT);
    assert_eq!(run(&["supertree", c.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn triangulate_emits_artifacts() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "same.nwk", SAME);
    let p = p.to_str().unwrap();

    let g: serde_json::Value = serde_json::from_slice(&run(&["triangulate", p, "--emit", "graph"]).stdout).unwrap();
    assert_eq!(g["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(g["edges"].as_array().unwrap().len(), 10);

    let f: serde_json::Value = serde_json::from_slice(&run(&["triangulate", p, "--emit", "fill"]).stdout).unwrap();
    assert_eq!(f["fill"].as_array().unwrap().len(), 3);

    let d: serde_json::Value =
        serde_json::from_slice(&run(&["triangulate", p, "--emit", "decomposition"]).stdout).unwrap();
    let nodes = d["nodes"].as_array().unwrap();
    assert_eq!(d["edges"].as_array().unwrap().len(), nodes.len() - 1);
    assert!(nodes.iter().all(|n| n["bag"].as_array().unwrap().len() == 3));
}

#[test]
fn verify_reports_legality() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "same.nwk", SAME);
    let p = p.to_str().unwrap();

    let out = run(&[
        "verify",
        p,
        "--fill",
        r#"{"fill":[["u1","u2"],["v1","v2"],["u1","v2"]]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        (v["chordal"].clone(), v["legal"].clone(), v["concise"].clone()),
        (true.into(), true.into(), true.into())
    );

    let f = write(
        &dir,
        "quad.json",
        r#"{"fill":[["u1","u2"],["v1","v2"],["u1","v2"],["v1","u2"]]}"#,
    );
    let out = run(&["verify", p, "--fill", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["legal"], false);
    assert_eq!(v["lt1_violations"].as_array().unwrap().len(), 1);

    let out = run(&["verify", p, "--fill", r#"{"fill":[["u1","nowhere"]]}"#]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_seeded() {
    let a = run(&["gen", "--seed", "11", "--trees", "3", "--taxa", "5", "--overlap", "0.7"]);
    let b = run(&["gen", "--seed", "11", "--trees", "3", "--taxa", "5", "--overlap", "0.7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 3);

    let dir = TempDir::new().unwrap();
    let o = dir.path().join("gen.nwk");
    run(&[
        "gen",
        "--seed",
        "11",
        "--trees",
        "3",
        "--taxa",
        "5",
        "--overlap",
        "0.7",
        "-o",
        o.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&o).unwrap(), a.stdout);
    let out = run(&["check", "--limit", "64", o.to_str().unwrap()]);
    assert!(matches!(out.status.code(), Some(0 | 1)));

    assert_eq!(
        run(&["gen", "--seed", "1", "--trees", "0", "--taxa", "5"])
            .status
            .code(),
        Some(2)
    );
}
