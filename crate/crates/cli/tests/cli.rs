use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn stackmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackmap"))
        .args(args)
        .env_remove("STACKMAP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = stackmap(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn sample_is_byte_identical_per_seed() {
    let args = [
        "sample", "--family", "tri", "--law", "uniform", "--size", "1000", "--seed", "7",
        "--format", "json",
    ];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["family"], "tri");
    assert_eq!(v["vertices"].as_array().unwrap().len(), 1003);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3 * 1003 - 6);
    assert_ne!(a, stdout(&["sample", "--size", "1000", "--seed", "8"]));
}

#[test]
fn seed_falls_back_to_environment() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_stackmap"))
        .args([
            "sample", "--family", "quad", "--law", "growth", "--size", "50",
        ])
        .env("STACKMAP_SEED", "11")
        .output()
        .unwrap();
    let explicit = stdout(&[
        "sample", "--family", "quad", "--law", "growth", "--size", "50", "--seed", "11",
    ]);
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), explicit);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    let p = path.to_str().unwrap();
    let printed = stdout(&["sample", "--size", "40", "--seed", "3"]);
    stdout(&["sample", "--size", "40", "--seed", "3", "--out", p]);
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
    let svg = dir.path().join("map.svg");
    stdout(&[
        "draw",
        "--size",
        "40",
        "--seed",
        "3",
        "--out",
        svg.to_str().unwrap(),
    ]);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn counts_are_exact() {
    assert_eq!(
        stdout(&["count", "--what", "trees", "--args", "5"]),
        "273\n"
    );
    assert_eq!(
        stdout(&["count", "--what", "trees", "--args", "4", "--arity", "2"]),
        "14\n"
    );
    assert_eq!(
        stdout(&["count", "--what", "histories", "--args", "4"]),
        "105\n"
    );
    assert_eq!(
        stdout(&["count", "--what", "histories", "--args", "((()()())()())"]),
        "1\n"
    );
    assert_eq!(
        stdout(&["count", "--what", "forests", "--args", "1", "10"]),
        "12\n"
    );
}

#[test]
fn enumerate_lists_every_tree() {
    let csv = stdout(&["enumerate", "--size", "3", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 13);
    let v: Value =
        serde_json::from_str(&stdout(&["enumerate", "--family", "quad", "--size", "3"])).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn passage_eval_reports_distance() {
    let v: Value = serde_json::from_str(&stdout(&[
        "passage",
        "eval",
        "--word",
        "22123122131",
        "--family",
        "tri",
    ]))
    .unwrap();
    assert_eq!(v["gamma"], 4);
    assert_eq!(v["root_distance"], 4);
    let q: Value = serde_json::from_str(&stdout(&[
        "passage", "eval", "--word", "11", "--family", "quad",
    ]))
    .unwrap();
    assert_eq!(q["root_distance"], 3);
    assert_eq!(q["literal"], 2);
}

#[test]
fn stats_report_is_deterministic_across_thread_counts() {
    let base = [
        "stats",
        "--experiment",
        "gamma-rate",
        "--n",
        "20000",
        "--reps",
        "6",
        "--seed",
        "1",
    ];
    let a = stdout(&base);
    let mut seq = base.to_vec();
    seq.extend(["--threads", "1"]);
    assert_eq!(a, stdout(&seq));
    let v: Value = serde_json::from_str(&a).unwrap();
    let rate = v["estimates"][0]["value"].as_f64().unwrap();
    assert!((rate - 2.0 / 11.0).abs() < 0.01);
    let csv = stdout(&[
        "stats",
        "--experiment",
        "gamma-rate",
        "--n",
        "1000",
        "--reps",
        "2",
        "--format",
        "csv",
    ]);
    assert!(csv.contains("rate"));
}

#[test]
fn frag_and_ball_are_deterministic() {
    let f = ["frag", "--arity", "3", "--k", "100", "--seed", "5"];
    assert_eq!(stdout(&f), stdout(&f));
    let v: Value = serde_json::from_str(&stdout(&f)).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 1 + 3 * 99);
    let b = ["ball", "--r", "3", "--seed", "5", "--family", "tri"];
    assert_eq!(stdout(&b), stdout(&b));
    let svg = stdout(&["ball", "--r", "3", "--seed", "5", "--format", "svg"]);
    assert!(svg.starts_with("<svg"));
}

#[test]
fn verify_quick_passes() {
    let o = stackmap(&["verify", "--level", "quick", "--max-exhaustive", "4"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["frobnicate"],
        vec!["sample", "--size", "-3"],
        vec!["sample", "--family", "pent"],
        vec!["stats", "--experiment", "no-such"],
        vec!["stats", "--experiment", "gamma-rate", "--n", "0"],
        vec!["frag", "--k", "0"],
        vec!["count", "--what", "forests", "--args", "3"],
        vec!["passage", "eval", "--word", "14"],
        vec!["sample", "--out", "/nonexistent/dir/x.json"],
    ] {
        assert_eq!(stackmap(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(stackmap(&["--help"]).status.code(), Some(0));
}
