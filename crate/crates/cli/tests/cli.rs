use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mifkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mifkit"))
        .args(args)
        .output()
        .expect("run mifkit")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().last().expect("a line of output")).expect("json")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn construct(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let p = path(dir, name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", p.to_str().unwrap()]);
    let out = mifkit(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_families() {
    let dir = TempDir::new().unwrap();
    let f = construct(&dir, "f53.json", &["--family", "F", "--k", "5", "--t", "3"]);
    let text = std::fs::read_to_string(&f).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["blocks"].as_array().unwrap().len(), 6);

    let out = mifkit(&["construct", "--family", "G", "--k", "5", "--t", "4"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["blocks"], 35);

    let out = mifkit(&["construct", "--family", "F", "--k", "2", "--t", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid parameters"));
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let f42 = construct(&dir, "f42.json", &["--family", "F", "--k", "4", "--t", "2"]);
    let tri = construct(&dir, "tri.json", &["--family", "triangle"]);
    let mif = path(&dir, "mif4a.json");
    let out = mifkit(&["compose", "embed", "--cif", s(&f42), "--mif", s(&tri), "-o", s(&mif)]);
    assert!(out.status.success());

    let out = mifkit(&["check", "--property", "mif", s(&mif)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds"], true);

    let out = mifkit(&["check", "--property", "mif", s(&f42)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);

    let g42 = construct(&dir, "g42.json", &["--family", "G", "--k", "4", "--t", "2"]);
    let out = mifkit(&["check", "--property", "cif", s(&g42)]);
    assert_eq!(out.status.code(), Some(0));

    let out = mifkit(&["check", "--property", "dual-tau", s(&g42)]);
    // one point from each part: the smaller part, of size 3, blocks them all
    assert_eq!(json(&out)["value"], 3);

    let missing = path(&dir, "missing.json");
    let out = mifkit(&["check", "--property", "mif", s(&missing)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compose_embed_verified() {
    let dir = TempDir::new().unwrap();
    let f53 = construct(&dir, "f53.json", &["--family", "F", "--k", "5", "--t", "3"]);
    let tri = construct(&dir, "tri.json", &["--family", "triangle"]);
    let out = mifkit(&["compose", "embed", "--cif", s(&f53), "--mif", s(&tri), "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["blocks"], 234);
    assert!(v["verification"].as_array().unwrap().iter().all(|c| c["holds"] == true));
}

#[test]
fn compose_extend_and_decompose() {
    let dir = TempDir::new().unwrap();
    let c32 = construct(&dir, "cc32.json", &["--family", "complete", "--k", "3", "--t", "2"]);
    let c41 = construct(&dir, "cc41.json", &["--family", "complete", "--k", "4", "--t", "1"]);
    let out = mifkit(&["compose", "extend", "--f", s(&c32), "--g", s(&c41), "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["blocks"], 17);
    assert_eq!(v["claimed"]["kind"], "cif");

    let tri = construct(&dir, "tri.json", &["--family", "triangle"]);
    let (fam, dual) = (path(&dir, "F.json"), path(&dir, "Fdual.json"));
    let out = mifkit(&[
        "compose", "decompose", "--family", s(&tri), "--point", "a", "--out-family", s(&fam), "--out-dual", s(&dual),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&fam).unwrap(), "{\"points\":[\"b\",\"c\"],\"blocks\":[[0,1]]}\n");
    assert_eq!(std::fs::read_to_string(&dual).unwrap(), "{\"points\":[\"b\",\"c\"],\"blocks\":[[0],[1]]}\n");
}

#[test]
fn compose_rejects_failed_preconditions() {
    let dir = TempDir::new().unwrap();
    let f42 = construct(&dir, "f42.json", &["--family", "F", "--k", "4", "--t", "2"]);
    let one = construct(&dir, "one.json", &["--family", "singleton"]);
    let out = mifkit(&["compose", "embed", "--cif", s(&f42), "--mif", s(&one)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("block size mismatch"));
}

#[test]
fn partitions_feed_the_partitioned_composer() {
    let dir = TempDir::new().unwrap();
    let c32 = construct(&dir, "c32.json", &["--family", "complete", "--k", "3", "--t", "2"]);
    let one = construct(&dir, "one.json", &["--family", "singleton"]);
    let out = mifkit(&["partitions", "--cif", s(&c32), "--classes", "2"]);
    let v = json(&out);
    assert_eq!(v["count"], 3);
    let p = path(&dir, "p.json");
    std::fs::write(&p, v["partitions"][0].to_string()).unwrap();
    let out = mifkit(&[
        "compose", "partitioned", "--cif", s(&c32), "--partition", s(&p), "--mif", s(&one), "--mif", s(&one), "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let f42 = construct(&dir, "f42.json", &["--family", "F", "--k", "4", "--t", "2"]);
    let out = mifkit(&["--budget", "1000", "partitions", "--cif", s(&f42), "--classes", "3", "--mode", "affine"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds budget"));
}

#[test]
fn bound_commands() {
    let out = mifkit(&["bound", "--corollary", "5"]);
    assert_eq!(json(&out)["bound"], 144);
    let out = mifkit(&["bound", "--lower", "5", "--t", "3", "--base", "3"]);
    assert_eq!(json(&out)["bound"], 204);
    let out = mifkit(&["bound", "--lower", "5", "--t", "3"]);
    assert_eq!(json(&out)["bound"], 204);
    let out = mifkit(&["bound", "--lower", "7", "--t", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = TempDir::new().unwrap();
    let f42 = construct(&dir, "f42.json", &["--family", "F", "--k", "4", "--t", "2"]);
    let tri = construct(&dir, "tri.json", &["--family", "triangle"]);
    let mif = path(&dir, "mif4a.json");
    mifkit(&["compose", "embed", "--cif", s(&f42), "--mif", s(&tri), "-o", s(&mif)]);
    let out = mifkit(&["bound", "--upper", s(&mif)]);
    assert_eq!(json(&out)["detail"], "42 ≤ 256: pass");
}

#[test]
fn iso_verdicts() {
    let dir = TempDir::new().unwrap();
    let f42 = construct(&dir, "f42.json", &["--family", "F", "--k", "4", "--t", "2"]);
    let f43 = construct(&dir, "f43.json", &["--family", "F", "--k", "4", "--t", "3"]);
    let tri = construct(&dir, "tri.json", &["--family", "triangle"]);
    let one = construct(&dir, "one.json", &["--family", "singleton"]);
    let (a, b) = (path(&dir, "mif4a.json"), path(&dir, "mif4b.json"));
    mifkit(&["compose", "embed", "--cif", s(&f42), "--mif", s(&tri), "-o", s(&a)]);
    mifkit(&["compose", "embed", "--cif", s(&f43), "--mif", s(&one), "-o", s(&b)]);

    let out = mifkit(&["iso", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["separating_invariant"], "degree_profile");

    // a relabeled copy
    let text = std::fs::read_to_string(&a).unwrap().replace("X0:", "P").replace("X1:", "Q");
    let c = path(&dir, "copy.json");
    std::fs::write(&c, text).unwrap();
    let out = mifkit(&["iso", s(&a), s(&c)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["mapping"].as_object().unwrap().len(), 10);

    let out = mifkit(&["iso", s(&tri), s(&one)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn repro_table() {
    let out = mifkit(&["repro"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let lines: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.len() >= 8);
    for l in &lines {
        for key in ["id", "expected", "computed", "provenance", "match"] {
            assert!(l.get(key).is_some(), "{key} missing in {l}");
        }
        if l["provenance"] != "flagged" {
            assert_eq!(l["match"], true, "{l}");
        }
    }
    let flagged: Vec<&Value> = lines.iter().filter(|l| l["provenance"] == "flagged").collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0]["computed"], 3);

    let out = mifkit(&["repro", "--item", "noniso4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["computed"]["isomorphic"], false);

    let out = mifkit(&["repro", "--item", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let runs: Vec<Output> = (0..2)
        .map(|i| {
            let threads = if i == 0 { "1" } else { "4" };
            mifkit(&["--threads", threads, "construct", "--family", "G", "--k", "6", "--t", "3"])
        })
        .collect();
    assert_eq!(runs[0].stdout, runs[1].stdout);
    let a = mifkit(&["--threads", "1", "repro"]);
    let b = mifkit(&["--threads", "3", "repro"]);
    assert_eq!(a.stdout, b.stdout);
}
