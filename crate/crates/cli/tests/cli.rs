use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kvcheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn h_matches_counterexample() {
    let out = run(&["h", "--q", "2", "--a", "2", "--m", "1,1,1,1,1,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"h0":0,"h1":1,"h2":0,"chi":-1}"#
    );
}

#[test]
fn h_dumps_matrix_on_stderr() {
    let out = run(&[
        "h",
        "--q",
        "2",
        "--a",
        "2",
        "--m",
        "1,1,1,1,1,1,1",
        "--dump-matrix",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dump = String::from_utf8(out.stderr).unwrap();
    // one row per point, six conic monomials per row
    assert_eq!(dump.lines().count(), 7);
    assert!(dump.lines().all(|l| l.split_whitespace().count() == 6));
}

#[test]
fn h_negative_multiplicities() {
    let out = run(&["h", "--q", "2", "--a", "0", "--m", "-1,0,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["h0"], 1);
}

#[test]
fn cone_refuses_q3() {
    let out = run(&["cone", "--q", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("cone certified for q=2 only"));
}

#[test]
fn cone_q2_lists_fourteen_generators() {
    let out = run(&["cone", "--q", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["generators"].as_array().unwrap().len(), 14);
    assert_eq!(v["summary"]["undetermined"], Value::Null);
}

#[test]
fn report_q2_passes_and_is_deterministic() {
    let a = run(&["report", "--q", "2", "--seed", "7"]);
    let b = run(&["report", "--q", "2", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["schema"], 1);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 25);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let ids: Vec<&str> = checks
        .iter()
        .map(|c| c["check_id"].as_str().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = Command::new(env!("CARGO_BIN_EXE_kvcheck"))
        .args(["report", "--q", "3"])
        .env("KVCHECK_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_kvcheck"))
        .args(["report", "--q", "3"])
        .env("KVCHECK_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_kvcheck"))
        .args(["report", "--q", "2"])
        .env("KVCHECK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn report_q3_skips_cone() {
    let out = run(&["report", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    let get = |id: &str| checks.iter().find(|c| c["check_id"] == id).unwrap();
    assert_eq!(get("cone.generators")["status"], "skipped");
    assert_eq!(get("cone.generators")["data"]["reason"], "q=2 only");
    assert_eq!(get("kvv.h1")["status"], "pass");
    assert!(get("kvv.h1")["data"]["h1"].as_u64().unwrap() >= 3);
}

#[test]
fn report_writes_file() {
    let dir = std::env::temp_dir().join(format!("kvcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let out = run(&["report", "--q", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["q"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["report", "--q", "6"]).status.code(), Some(2));
    assert_eq!(
        run(&["report", "--q", "2", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["kmk", "--field", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["fibers", "--q", "2", "--ext", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["h", "--q", "2", "--a", "1", "--m", "1,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn planes_export() {
    let v = json(&run(&["planes", "--q", "2"]));
    assert_eq!(v["points"].as_array().unwrap().len(), 7);
    assert_eq!(v["on"][0].as_array().unwrap().len(), 7);
}

#[test]
fn members_q3() {
    let v = json(&run(&["members", "--q", "3"]));
    assert_eq!(v["count"], 13);
    assert!(v["members"]
        .as_array()
        .unwrap()
        .iter()
        .all(|m| m["lines"].as_array().unwrap().len() == 4));
}

#[test]
fn fibers_census() {
    let out = run(&[
        "fibers",
        "--q",
        "3",
        "--ext",
        "4",
        "--samples",
        "10",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["histogram"]["1"], 10);
    assert_eq!(v["seed"], 2);
    assert!(v["degenerate_count"].is_u64());
}

#[test]
fn kmk_reports() {
    for field in ["2", "4"] {
        let out = run(&["kmk", "--field", field]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert!(v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .all(|c| c["status"] == "pass"));
    }
}

#[test]
fn dpcontrol_scan() {
    let out = run(&[
        "dpcontrol",
        "--points",
        "6",
        "--field-order",
        "32",
        "--trials",
        "5",
        "--seed",
        "4",
        "--negative-control",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["scan"]["falsifications"].as_array().unwrap().len(), 0);
    assert_eq!(v["negative_control"]["h1"], 1);
    assert_eq!(
        run(&["dpcontrol", "--points", "7", "--field-order", "2"])
            .status
            .code(),
        Some(2)
    );
}
