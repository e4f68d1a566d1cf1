use std::path::Path;
use std::process::{Command, Output};

fn gwinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwinv")).args(args).env_remove("GW_CACHE").env_remove("GW_CONFIG").output().expect("run gwinv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn pt_list(k: usize) -> String {
    vec!["pt"; k].join(",")
}

#[test]
fn invariant_examples() {
    let o = gwinv(&["invariant", "--space", "blowup", "--n", "2", "--beta", "3,2", "--classes", &pt_list(6)]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1\n"));
    let o = gwinv(&["invariant", "--space", "blowup", "--n", "3", "--beta", "1,-1", "--classes", "E2,E2,E2,E2,E2,E2"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "3\n"));
    let o = gwinv(&["invariant", "--space", "plain", "--n", "3", "--beta", "1", "--classes", "H3,H2,H2"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "1\n"));
}

#[test]
fn explain_prints_trace() {
    let o = gwinv(&["invariant", "--n", "2", "--beta", "2,0", "--classes", "H1,pt,pt,pt,pt,pt", "--explain"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("2\n"));
    assert!(out.contains("divisor axiom"));
    assert!(out.contains("solved level"));
}

#[test]
fn off_grade_query_warns_and_vanishes() {
    let o = gwinv(&["invariant", "--n", "2", "--beta", "1,0", "--classes", "pt,pt,pt"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "0\n"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        vec!["invariant", "--n", "2", "--beta", "1,0", "--classes", "X7"],
        vec!["invariant", "--n", "2", "--beta", "one", "--classes", "pt"],
        vec!["invariant", "--space", "plain", "--n", "2", "--beta", "1", "--classes", "E1,pt,pt"],
        vec!["invariant", "--n", "1", "--beta", "1", "--classes", "pt"],
        vec!["table", "--id", "P5-points"],
        vec!["check", "--suite", "everything"],
    ] {
        let o = gwinv(&args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn tables() {
    let o = gwinv(&["table", "--id", "P2-points", "--dmax", "7", "--diff-paper"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("| 1 | 1 | 1 | 12 | 620 | 87304 | 26312976 | 14616808192 |"));

    let o = gwinv(&["table", "--id", "P3-points", "--dmax", "6", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    assert!(csv.starts_with("e\\d,1,2,3,4,5,6\n"));
    assert!(csv.contains("\n2,0,0,0,0,12,384\n"));

    let o = gwinv(&["table", "--id", "P3-exceptional", "--dmax", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("| -2 | -68 | -35832 |"));
}

#[test]
fn table_json_schema() {
    let o = gwinv(&["table", "--id", "P2-points", "--dmax", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["id"], "P2-points");
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 3 * 7);
    let c = cells.iter().find(|c| c["d"] == 3 && c["e"] == 0).unwrap();
    assert_eq!(c["value"], "12");
    assert_eq!(c.as_object().unwrap().len(), 3);
}

#[test]
fn checks_pass() {
    let o = gwinv(&["check", "--suite", "oracle", "--dmax", "7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = gwinv(&["check", "--suite", "remarks", "--dmax", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = gwinv(&["check", "--suite", "wdvv", "--n", "2", "--dmax", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 100);
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["detail"].as_str().unwrap().ends_with("residual 0/1")));
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn cache_round_trip_merge_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let a_s = a.to_str().unwrap();
    let b_s = b.to_str().unwrap();

    let o = gwinv(&["--cache", a_s, "table", "--id", "P2-points", "--dmax", "4"]);
    assert_eq!(code(&o), 0);
    let first = stdout(&o);
    let cached = read(&a);
    assert!(!cached.is_empty());
    // same output, same cache bytes on a second (warm) run
    let o = gwinv(&["--cache", a_s, "table", "--id", "P2-points", "--dmax", "4"]);
    assert_eq!(stdout(&o), first);
    assert_eq!(read(&a), cached);

    let o = gwinv(&["--cache", b_s, "invariant", "--n", "3", "--beta", "1,-1", "--classes", "E2,E2,E2,E2,E2,E2"]);
    assert_eq!(code(&o), 0);

    let o = gwinv(&["--cache", a_s, "cache", "dump"]);
    assert_eq!(stdout(&o), cached);

    let merged = dir.path().join("m.jsonl");
    let o = gwinv(&["cache", "merge", a_s, b_s, "--out", merged.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let m = read(&merged);
    assert_eq!(m.lines().count(), cached.lines().count() + read(&b).lines().count());
    let mut sorted: Vec<&str> = m.lines().collect();
    sorted.sort();
    assert_eq!(sorted, m.lines().collect::<Vec<_>>());

    let o = gwinv(&["--cache", merged.to_str().unwrap(), "cache", "verify", "--fraction", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // tamper with the (4,2) entry
    let tampered = dir.path().join("t.jsonl");
    let bad = cached.replace("\"value\":\"96/1\"", "\"value\":\"97/1\"");
    assert_ne!(bad, cached);
    std::fs::write(&tampered, &bad).unwrap();
    let o = gwinv(&["cache", "merge", a_s, tampered.to_str().unwrap()]);
    assert_eq!(code(&o), 6);
    let o = gwinv(&["--cache", tampered.to_str().unwrap(), "cache", "verify", "--fraction", "1"]);
    assert_eq!(code(&o), 6);
    let o = gwinv(&["--cache", tampered.to_str().unwrap(), "table", "--id", "P2-points", "--dmax", "4", "--diff-paper"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn cache_path_from_env_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let from_cfg = dir.path().join("cfg.jsonl");
    let from_env = dir.path().join("env.jsonl");
    let cfg = dir.path().join("gwinv.conf");
    std::fs::write(&cfg, format!("space=plain\nn=2\ncache_path={}\n", from_cfg.display())).unwrap();
    let args = ["--config", cfg.to_str().unwrap(), "invariant", "--beta", "3", "--classes", &pt_list(8)];

    let o = gwinv(&args);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "12\n"));
    assert!(from_cfg.exists());

    let o = Command::new(env!("CARGO_BIN_EXE_gwinv")).args(args).env("GW_CACHE", &from_env).output().unwrap();
    assert_eq!(code(&o), 0);
    assert!(from_env.exists());
    assert_eq!(read(&from_env), read(&from_cfg));

    std::fs::write(&cfg, "colour=blue\n").unwrap();
    assert_eq!(code(&gwinv(&args)), 2);
}

#[test]
fn corrupt_cache_file_exits_6() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.jsonl");
    std::fs::write(&p, "not a record\n").unwrap();
    let o = gwinv(&["--cache", p.to_str().unwrap(), "invariant", "--n", "2", "--beta", "1,0", "--classes", "pt,pt"]);
    assert_eq!(code(&o), 6);
}
