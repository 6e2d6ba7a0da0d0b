use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn rigidrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigidrel"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let leq = write(
        dir.path(),
        "leq.json",
        r#"{"k":2,"h":2,"tuples":[[0,0],[0,1],[1,1]]}"#,
    );
    let full = write(dir.path(), "full.json", r#"{"k":2,"h":2,"mask_hex":"0f"}"#);

    assert_eq!(
        code(&rigidrel(&["check", "--relation", &leq, "--ell", "2"])),
        0
    );

    let o = rigidrel(&["check", "--relation", &full, "--ell", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(
        json(&o)["report"]["failing_function"],
        serde_json::json!({"k": 2, "table": [1, 0]})
    );

    let o = rigidrel(&["check", "--relation", &leq, "--ell", "1"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["reason"].is_string());
}

#[test]
fn check_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    let empty = write(dir.path(), "empty.json", r#"{"k":2,"h":2,"tuples":[]}"#);
    let leq = write(
        dir.path(),
        "leq.json",
        r#"{"k":2,"h":2,"tuples":[[0,0],[0,1],[1,1]]}"#,
    );
    assert_eq!(
        code(&rigidrel(&["check", "--relation", &bad, "--ell", "2"])),
        2
    );
    assert_eq!(
        code(&rigidrel(&["check", "--relation", &empty, "--ell", "2"])),
        2
    );
    assert_eq!(
        code(&rigidrel(&["check", "--relation", &leq, "--ell", "3"])),
        2
    );
    assert_eq!(code(&rigidrel(&["check", "--ell", "2"])), 2);
}

#[test]
fn construct_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rho.json");
    let o = rigidrel(&[
        "construct",
        "--k",
        "5",
        "--ell",
        "2",
        "--h",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["lhs"], "20");
    assert_eq!(json(&o)["rhs"], "20");
    assert_eq!(
        code(&rigidrel(&[
            "check",
            "--relation",
            out.to_str().unwrap(),
            "--ell",
            "2"
        ])),
        0
    );

    let o = rigidrel(&["construct", "--k", "6", "--ell", "2", "--h", "3"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("30") && err.contains("20"), "{err}");

    let o = rigidrel(&["construct", "--k", "2", "--ell", "2", "--h", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        json(&o),
        serde_json::json!({"k": 2, "h": 2, "tuples": [[0, 0], [0, 1], [1, 1]]})
    );
}

fn classify(args: &[&str]) -> (i32, Vec<Value>, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let mut full = vec!["classify", "--out", out.to_str().unwrap()];
    full.extend_from_slice(args);
    let o = rigidrel(&full);
    let records = fs::read_to_string(&out)
        .unwrap_or_default()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (code(&o), records, String::from_utf8(o.stdout).unwrap())
}

fn rigid_count(records: &[Value]) -> usize {
    records.iter().filter(|r| r["verdict"] == true).count()
}

#[test]
fn classify_census_examples() {
    let (c, recs, summary) = classify(&["--k", "2", "--h", "2", "--ell", "2"]);
    assert_eq!(c, 0);
    assert_eq!(recs.len(), 15);
    assert_eq!(rigid_count(&recs), 2);
    let ranks: Vec<u64> = recs
        .iter()
        .map(|r| r["relation_rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, (1..16).collect::<Vec<_>>());
    assert_eq!(
        summary,
        "k,h,ell,relations,rigid,not_rigid\n2,2,2,15,2,13\n"
    );

    assert_eq!(
        rigid_count(&classify(&["--k", "2", "--h", "1", "--ell", "2"]).1),
        0
    );
    assert_eq!(
        rigid_count(&classify(&["--k", "2", "--h", "2", "--ell", "1"]).1),
        0
    );
    assert_eq!(classify(&["--k", "3", "--h", "3", "--ell", "2"]).0, 2);
}

#[test]
fn classify_records_replay_through_check() {
    let (_, recs, _) = classify(&["--k", "2", "--h", "3", "--ell", "2"]);
    let dir = tempfile::tempdir().unwrap();
    for rec in recs.iter().step_by(17) {
        let rank = rec["relation_rank"].as_u64().unwrap();
        let rho = rigidrel::kernel::Relation::from_relation_rank(2, 3, rank).unwrap();
        let path = write(
            dir.path(),
            "r.json",
            &serde_json::to_string(&rho.to_json_compact()).unwrap(),
        );
        let o = rigidrel(&["check", "--relation", &path, "--ell", "2"]);
        assert_eq!(code(&o) == 0, rec["verdict"] == true);
        assert_eq!(
            json(&o)["report"]["failing_function"],
            rec["failing_function"]
        );
    }
}

#[test]
fn classify_resume_reproduces_full_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let path = out.to_str().unwrap();
    let base = [
        "classify", "--k", "2", "--h", "3", "--ell", "2", "--out", path,
    ];
    let first = rigidrel(&base);
    let full = fs::read(&out).unwrap();

    let truncated: String = String::from_utf8(full.clone())
        .unwrap()
        .lines()
        .take(40)
        .map(|l| format!("{l}\n"))
        .collect();
    fs::write(&out, truncated).unwrap();
    let mut resumed_args = base.to_vec();
    resumed_args.extend(["--resume-from", "30"]);
    let resumed = rigidrel(&resumed_args);
    assert_eq!(code(&resumed), 0);
    assert_eq!(fs::read(&out).unwrap(), full);
    assert_eq!(resumed.stdout, first.stdout);
}

#[test]
fn classify_timings_are_opt_in() {
    let (_, recs, _) = classify(&["--k", "2", "--h", "2", "--ell", "2"]);
    assert!(recs.iter().all(|r| r.get("elapsed_micros").is_none()));
    let (_, recs, _) = classify(&["--k", "2", "--h", "2", "--ell", "2", "--timings"]);
    assert!(recs.iter().all(|r| r["elapsed_micros"].is_u64()));
}

fn bounds(args: &[&str]) -> Vec<(String, String)> {
    let mut full = vec!["bounds"];
    full.extend_from_slice(args);
    let o = rigidrel(&full);
    let mut r = csv::Reader::from_reader(&o.stdout[..]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].to_string())
        })
        .collect()
}

fn lookup<'a>(rows: &'a [(String, String)], key: &str) -> &'a str {
    &rows.iter().find(|r| r.0 == key).unwrap().1
}

#[test]
fn bounds_examples() {
    assert_eq!(lookup(&bounds(&["--ell", "2", "--h", "4"]), "max_k"), "59");
    assert_eq!(lookup(&bounds(&["--ell", "2", "--h", "1"]), "max_k"), "0");
    let r = bounds(&["--ell", "3", "--h", "4"]);
    assert_eq!(lookup(&r, "r_lower"), "155117520");
    assert_eq!(lookup(&r, "r_upper"), "9075135300");
    let r = bounds(&["--ell", "2", "--h", "4", "--k", "60"]);
    assert_eq!(lookup(&r, "construction_bound_holds"), "false");
    assert_eq!(
        code(&rigidrel(&[
            "bounds", "--ell", "2", "--h", "4", "--k", "60"
        ])),
        1
    );
}

#[test]
fn strong_witness_for_xor() {
    let dir = tempfile::tempdir().unwrap();
    let xor = write(
        dir.path(),
        "xor.json",
        r#"{"k":2,"n":2,"graph":[{"args":[0,0],"value":0},{"args":[0,1],"value":1},{"args":[1,0],"value":1},{"args":[1,1],"value":0}]}"#,
    );
    let o = rigidrel(&["strong", "--suite", "witness", "--fn-file", &xor]);
    assert_eq!(code(&o), 0);
    let w = json(&o);
    assert_eq!((w["h"].as_u64(), w["t"].as_u64()), (Some(4), Some(2)));
    assert_eq!(w["violated"], "delta(2,4)");

    let proj = write(
        dir.path(),
        "p.json",
        r#"{"k":2,"n":2,"graph":[{"args":[0,1],"value":1}]}"#,
    );
    assert_eq!(
        code(&rigidrel(&[
            "strong",
            "--suite",
            "witness",
            "--fn-file",
            &proj
        ])),
        1
    );
}

#[test]
fn strong_suites() {
    let o = rigidrel(&["strong", "--suite", "chain", "--h", "2", "--arity-cap", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["separator"], "phi(3)");
    assert_eq!(
        code(&rigidrel(&["strong", "--suite", "phi", "--n", "3"])),
        0
    );
    assert_eq!(
        code(&rigidrel(&[
            "strong",
            "--suite",
            "limit",
            "--arity-cap",
            "2"
        ])),
        0
    );
    assert_eq!(
        code(&rigidrel(&[
            "strong",
            "--suite",
            "limit",
            "--arity-cap",
            "4"
        ])),
        2
    );
}
