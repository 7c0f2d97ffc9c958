use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn mvmodal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvmodal")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

struct Files(TempDir);

impl Files {
    fn new() -> Files {
        Files(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn sequent(&self, name: &str, premises: &[&str], conclusion: &str) -> String {
        let v = serde_json::json!({"premises": premises, "conclusion": conclusion});
        path_str(&self.write(name, &v.to_string()))
    }
}

fn path_str(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn decide_exit_codes() {
    let f = Files::new();
    let valid = f.sequent("k.json", &[], "[](x -> y) -> ([]x -> []y)");
    let invalid = f.sequent("t.json", &[], "<>x -> []x");
    let delta = f.sequent("d.json", &[], "D x");
    assert_eq!(code(&mvmodal(&["decide", "--sequent", &valid])), 0);
    assert_eq!(code(&mvmodal(&["decide", "--sequent", &invalid])), 1);
    assert_eq!(code(&mvmodal(&["decide", "--sequent", &delta])), 2);
    assert_eq!(
        code(&mvmodal(&["decide", "--sequent", &invalid, "--node-budget", "0"])),
        3
    );
}

#[test]
fn usage_errors_exit_two() {
    let f = Files::new();
    let s = f.sequent("s.json", &[], "x");
    assert_eq!(code(&mvmodal(&[])), 2);
    assert_eq!(code(&mvmodal(&["frobnicate"])), 2);
    assert_eq!(code(&mvmodal(&["decide"])), 2);
    assert_eq!(code(&mvmodal(&["decide", "--sequent", "/nonexistent/s.json"])), 2);
    assert_eq!(code(&mvmodal(&["decide", "--logic", "kgod", "--sequent", &s])), 2);
    assert_eq!(code(&mvmodal(&["search", "--sequent", &s, "--algebra", "mv:0"])), 2);
    let bad = path_str(&f.write("bad.json", r#"{"conclusion": "x", "extra": 1}"#));
    assert_eq!(code(&mvmodal(&["decide", "--sequent", &bad])), 2);
    let help = mvmodal(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(String::from_utf8_lossy(&help.stdout).contains("decide"));
}

#[test]
fn decide_countermodel_re_verifies_through_eval() {
    let f = Files::new();
    let s = f.sequent("s.json", &["<>x"], "[]x");
    let out = mvmodal(&["--format", "json", "decide", "--sequent", &s]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let world = v["world"].as_str().unwrap();
    let model = path_str(&f.write("m.json", &v["model"].to_string()));
    let value = |formula: &str| {
        let out = mvmodal(&[
            "--format",
            "json",
            "eval",
            "--model",
            &model,
            "--world",
            world,
            "--formula",
            formula,
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        json(&out)["value"].as_str().unwrap().to_string()
    };
    assert_eq!(value("<>x"), "1");
    assert_ne!(value("[]x"), "1");
}

#[test]
fn search_and_budget() {
    let f = Files::new();
    let s = f.sequent("s.json", &[], "[]x -> x");
    assert_eq!(code(&mvmodal(&["search", "--sequent", &s, "--algebra", "mv:2"])), 1);
    let four = f.sequent("4.json", &[], "[]x -> [][]x");
    let capped = mvmodal(&[
        "search",
        "--sequent",
        &four,
        "--algebra",
        "mv:2",
        "--transitive",
        "--budget",
        "1",
    ]);
    assert_eq!(code(&capped), 3, "{}", String::from_utf8_lossy(&capped.stdout));
    let out = mvmodal(&[
        "--format",
        "json",
        "search",
        "--sequent",
        &four,
        "--algebra",
        "mv:2",
        "--transitive",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "NoCounterexampleFound");
}

#[test]
fn pcp_pipeline_certifies_its_countermodel() {
    let f = Files::new();
    let inst = path_str(&f.write("p.json", r#"{"base": 10, "pairs": [[1, 11], [21, 2]]}"#));
    let out = mvmodal(&["--format", "json", "pcp", "solve", "--instance", &inst]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["solution"], serde_json::json!([2, 1]));

    let model = path_str(&f.0.path().join("cm.json"));
    let out = mvmodal(&[
        "pcp",
        "countermodel",
        "--instance",
        &inst,
        "--solution",
        "2,1",
        "--algebra",
        "luk",
        "--out",
        &model,
    ]);
    assert_eq!(code(&out), 1);
    let out = mvmodal(&[
        "pcp",
        "verify",
        "--instance",
        &inst,
        "--solution",
        "2,1",
        "--model",
        &model,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "verified");
    let out = mvmodal(&[
        "pcp",
        "verify",
        "--instance",
        &inst,
        "--solution",
        "1,2",
        "--model",
        &model,
    ]);
    assert_eq!(code(&out), 1);

    let unsolvable = path_str(&f.write("q.json", r#"{"base": 10, "pairs": [[1, 3], [21, 4]]}"#));
    assert_eq!(
        code(&mvmodal(&["pcp", "solve", "--instance", &unsolvable, "--max-len", "5"])),
        0
    );
}

#[test]
fn experiments_run() {
    let out = mvmodal(&[
        "--format",
        "json",
        "experiments",
        "omega-chain",
        "--alpha",
        "1/10",
        "--depth",
        "20",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = mvmodal(&["experiments", "delta-dt", "--n", "2", "--worlds", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    let s = f.sequent("s.json", &["[](x -> y)"], "<>x -> []y");
    let inst = path_str(&f.write("p.json", r#"{"base": 10, "pairs": [[12, 1], [2, 22]]}"#));
    let runs: [&[&str]; 4] = [
        &["--format", "json", "decide", "--sequent", &s],
        &["--format", "json", "search", "--sequent", &s, "--algebra", "mv:3"],
        &[
            "--format",
            "json",
            "pcp",
            "countermodel",
            "--instance",
            &inst,
            "--solution",
            "1,2",
        ],
        &["emit-smt", "--sequent", &s],
    ];
    for args in runs {
        let (a, b) = (mvmodal(args), mvmodal(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(code(&a), code(&b));
    }
}
