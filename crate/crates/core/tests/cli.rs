use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fibspace-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn fib_values_and_checks() {
    let o = run(&["fib", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "13\n");

    let o = run(&["fib", "--check-cassini", "1..1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "OK 1000/1000\n");

    let o = run(&["fib", "--check-all", "1..1000"]);
    assert_eq!(stdout(&o), "OK 3000/3000\n");
}

#[test]
fn fib_ratio_matches_phi_to_fifteen_digits() {
    let o = run(&["fib", "--ratio", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("1.618033988749894"), "{text}");
}

#[test]
fn transform_examples() {
    let o = run(&[
        "transform",
        "--seq",
        "fib_squares",
        "--len",
        "50",
        "--matrix",
        "fhat",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 50);
    assert_eq!(terms[0], "1");
    assert!(terms[1..].iter().all(|t| t == "0"));

    let o = run(&[
        "transform",
        "--seq",
        "ratio_sum",
        "--len",
        "50",
        "--matrix",
        "fhat",
    ]);
    let v = json(&o);
    assert_eq!(v["terms"][0], "1");
    assert_eq!(v["terms"][5], "13/8");
    assert_eq!(v["terms"][49], "20365011074/12586269025");
}

#[test]
fn roundtrip_on_a_file() {
    let path = temp_file(
        "zeros.json",
        r#"{"name": "zeros", "terms": ["0", "0", "0", "0"]}"#,
    );
    let o = run(&[
        "transform",
        "--file",
        path.to_str().unwrap(),
        "--matrix",
        "fhat",
        "--roundtrip",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "roundtrip: exact\n");
}

#[test]
fn input_errors_exit_65() {
    let bad = temp_file("bad.json", r#"{"terms": ["1/0"]}"#);
    let o = run(&["transform", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));

    let short = temp_file("short.csv", "1\n2\n3\n");
    let o = run(&["transform", "--file", short.to_str().unwrap(), "--len", "5"]);
    assert_eq!(o.status.code(), Some(65));

    let o = run(&["transform", "--seq", "no_such_sequence"]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(
        run(&["fib", "--check-cassini", "9..3"]).status.code(),
        Some(64)
    );
    assert_eq!(run(&["--tol", "0", "fib", "3"]).status.code(), Some(64));
    let o = run(&["classify", "--matrix", "fhat", "--from", "c", "--to", "bs"]);
    assert_eq!(o.status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn classify_examples() {
    let o = run(&[
        "classify", "--matrix", "fhat", "--corner", "200x200", "--from", "c0", "--to", "c0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["overall"], "member_evidence");

    let o = run(&[
        "classify", "--matrix", "fhat", "--corner", "200x200", "--from", "c", "--to", "c0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["overall"], "violated");
    let c4 = v["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "C4")
        .unwrap();
    assert_eq!(c4["verdict"], "violated");
    assert!(c4["witness"]["value"].is_string());
}

#[test]
fn classify_from_file_and_csv() {
    let rows: Vec<String> = (0..24)
        .map(|n| {
            let row: Vec<String> = (0..24)
                .map(|k| if k == n { "\"1/2\"".into() } else { "0".into() })
                .collect();
            format!("[{}]", row.join(","))
        })
        .collect();
    let path = temp_file(
        "half.json",
        &format!(
            r#"{{"rows": 24, "cols": 24, "entries": [{}]}}"#,
            rows.join(",")
        ),
    );
    let o = run(&[
        "classify",
        "--file",
        path.to_str().unwrap(),
        "--from",
        "c0_fhat",
        "--to",
        "ell_1",
    ]);
    let v = json(&o);
    let ids: Vec<&str> = v["required"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i.as_str().unwrap())
        .collect();
    assert_eq!(ids, ["C7", "C8", "C11"]);

    let o = run(&[
        "classify", "--matrix", "fhat", "--corner", "64x64", "--from", "c", "--to", "c0",
        "--format", "csv",
    ]);
    let text = stdout(&o);
    assert!(text.starts_with("source,target,id,"));
    assert!(text
        .lines()
        .any(|l| l.contains(",C4,") && l.contains("violated")));
}

#[test]
fn dual_examples() {
    let o = run(&["dual", "--seq", "zero", "--set", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 4);
    assert!(reports.iter().all(|r| r["verdict"] == "satisfied_evidence"));

    let o = run(&["dual", "--seq", "unit0", "--set", "d2"]);
    let v = json(&o);
    assert_eq!(v["set_id"], "d2");
    assert_eq!(v["extracted"]["sup"]["value"]["exact"], "1");

    let path = temp_file(
        "a.json",
        r#"{"terms": [1, "1/2", "1/4", "1/8", "1/16", "1/32", "1/64", "1/128",
        "1/256", "1/512", "1/1024", "1/2048", "1/4096", "1/8192", "1/16384", "1/32768"]}"#,
    );
    let o = run(&["dual", "--file", path.to_str().unwrap(), "--set", "d2"]);
    assert!(json(&o)["trace_tail"]
        .as_array()
        .is_some_and(|t| !t.is_empty()));
}

#[test]
fn basis_and_almost_examples() {
    let o = run(&["basis", "--n", "3", "--len", "10"]);
    let v = json(&o);
    assert_eq!(v["terms"][2], "0");
    assert_eq!(v["terms"][3], "5/3");

    let o = run(&[
        "basis",
        "--reconstruct",
        "--seq",
        "fib_squares",
        "--len",
        "64",
        "--m",
        "32",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["reconstruction"]["residual_norm"], "0");
    assert_eq!(v["residual_equals_dropped_sup"], true);

    let o = run(&["almost", "--seq", "alternating", "--len", "256"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "member_evidence");
    assert!(v["limit_estimate"].as_f64().unwrap().abs() < 1e-2);
}

#[test]
fn membership_exit_codes() {
    let o = run(&[
        "membership",
        "--seq",
        "fib_squares",
        "--len",
        "120",
        "--space",
        "ell_inf",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "membership",
        "--seq",
        "fib_squares",
        "--len",
        "120",
        "--space",
        "c0_fhat",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["exact_witness"], "transform is e^(0)");
}

#[test]
fn witnesses_are_deterministic() {
    for name in [
        "unbounded-member",
        "strict-inclusion",
        "row-facts",
        "non-solid",
        "basis",
    ] {
        let a = run(&["witness", name]);
        let b = run(&["witness", name]);
        assert_eq!(a.status.code(), Some(0), "{name}");
        assert_eq!(a.stdout, b.stdout, "{name}");
        assert_eq!(json(&a)["holds"], true, "{name}");
    }
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("fibspace-out-{}.json", std::process::id()));
    let o = run(&[
        "basis",
        "--n",
        "0",
        "--len",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["terms"][3], "25");
}
