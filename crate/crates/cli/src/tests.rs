//! Command behavior, run in-process through the argument parser.

use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Value};

use crate::{dispatch, Cli};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

/// Exit code and stdout text, with 2 for parse and input errors.
fn termlab(args: &[&str]) -> (u8, String) {
    let cli = match Cli::try_parse_from(std::iter::once("termlab").chain(args.iter().copied())) {
        Ok(cli) => cli,
        Err(e) => return (2, e.to_string()),
    };
    match dispatch(cli.command) {
        Ok(o) => (o.code, o.text),
        Err(e) => (2, e.to_string()),
    }
}

fn report(args: &[&str], tag: &str) -> (u8, Value) {
    let path = std::env::temp_dir().join(format!("termlab-test-{}-{tag}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let mut full = args.to_vec();
    full.extend(["--json", &p]);
    let (code, _) = termlab(&full);
    let text = std::fs::read_to_string(&path).expect("report written");
    std::fs::remove_file(&path).ok();
    (code, serde_json::from_str(&text).unwrap())
}

#[test]
fn program4_terminates() {
    let p = corpus("prog4.tl");
    let (code, out) = termlab(&["analyze", &p, "--method", "sct", "--clamp", "4", "--criterion", "A"]);
    assert_eq!(code, 0);
    assert!(out.contains("closure: 40 elements"), "{out}");
    assert!(out.ends_with("verdict: terminates\n"));
}

#[test]
fn trt_size_prints_five() {
    assert_eq!(termlab(&["ramsey", "trt-size", "3", "2"]), (0, "5\n".into()));
}

#[test]
fn program5_two_measures_is_unknown() {
    let p = corpus("prog5.tl");
    let (code, r) = report(
        &["analyze", &p, "--method", "sct", "--functions", "x,y", "--criterion", "A"],
        "p5",
    );
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "unknown");
    assert!(r["certificate"]["failing_element"].is_u64());
    assert!(!r["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let p = corpus("prog5.tl");
    let args = ["analyze", p.as_str(), "--functions", "x,y,x+y", "--clamp", "6"];
    let (_, mut a) = report(&args, "det-a");
    let (_, mut b) = report(&args, "det-b");
    for r in [&mut a, &mut b] {
        assert!(r["timing"]["elapsed_ms"].is_f64());
        r.as_object_mut().unwrap().remove("timing");
    }
    assert_eq!(a, b);
    assert_eq!(a["method"], "sct");
    assert_eq!(a["checked_domain"], "exact");
    assert_eq!(a["certificate"]["basis"], json!(["x", "y", "x + y"]));
    assert_eq!(a["certificate"]["closure_size"], 56);
}

#[test]
fn transinv_reports_box_domain() {
    let p = corpus("prog5.tl");
    let inv = corpus("prog5.inv");
    let (code, r) = report(
        &["analyze", &p, "--method", "transinv", "--invariant", &inv, "--box", "1..15"],
        "ti",
    );
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "terminates");
    assert_eq!(r["checked_domain"]["box"]["ranges"], json!([[1, 15], [1, 15]]));
    assert_eq!(r["checked_domain"]["box"]["input_cap"], 3);
}

#[test]
fn strict_invariant_is_rejected() {
    let p = corpus("not_transitive.tl");
    let inv = corpus("not_transitive_strict.inv");
    let (code, out) =
        termlab(&["analyze", &p, "--method", "transinv", "--invariant", &inv, "--box", "1..20"]);
    assert_eq!(code, 1);
    assert!(out.contains("step (2) --[1]--> (1)"), "{out}");
}

#[test]
fn ranking_method() {
    let p = corpus("prog4.tl");
    assert_eq!(termlab(&["analyze", &p, "--method", "ranking", "--rank", "w,x,y,z"]).0, 0);
    assert_eq!(termlab(&["analyze", &p, "--method", "ranking", "--rank", "x,y,z,w"]).0, 1);
    assert_eq!(termlab(&["analyze", &p, "--method", "ranking"]).0, 2);
}

#[test]
fn every_corpus_program_runs() {
    for name in ["prog2", "prog3", "prog4", "prog5", "prog6", "not_transitive"] {
        let p = corpus(&format!("{name}.tl"));
        let (code, out) = termlab(&["analyze", &p]);
        assert!(code <= 1, "{name}: {out}");
        let (code, out) =
            termlab(&["segments", &p, "--box", "1..3", "--max-len", "3", "--limit", "5"]);
        assert_eq!(code, 0, "{name}: {out}");
    }
}

#[test]
fn simulate_follows_a_script() {
    let p = corpus("prog5.tl");
    let (code, r) = report(&["simulate", &p, "--start", "5,2", "--script", "1 2 1 1 1"], "sim");
    assert_eq!(code, 0);
    assert_eq!(
        r["certificate"]["states"],
        json!([[5, 2], [4, 5], [3, 5], [2, 3], [1, 2], [0, 1]])
    );
    assert_eq!(r["certificate"]["terminated"], true);
    assert_eq!(termlab(&["simulate", &p, "--start", "5,2", "--script", "1"]).0, 2);
}

#[test]
fn seeded_simulation_is_reproducible() {
    let p = corpus("prog4.tl");
    let args = ["simulate", p.as_str(), "--start", "2,2,2,2", "--seed", "9"];
    assert_eq!(termlab(&args), termlab(&args));
}

#[test]
fn matrix_arithmetic() {
    let c2 = corpus("prog5_c2_printed.mat");
    assert_eq!(termlab(&["matrix", "mul", &c2, &c2]).1, "2\n-1 inf\ninf -1\n");
    assert_eq!(termlab(&["matrix", "pow", &c2, "4"]).1, "2\n-2 inf\ninf -2\n");
    let gens = ["prog4_c1.mat", "prog4_c2.mat", "prog4_c3.mat"].map(corpus);
    let (code, out) = termlab(&["matrix", "closure", &gens[0], &gens[1], &gens[2], "--clamp", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("closure: 40 elements"));
}

#[test]
fn audit_finds_the_printed_d1_counterexample() {
    let p = corpus("prog5.tl");
    let d1 = corpus("prog5_d1_printed.mat");
    let args = ["audit", p.as_str(), "--case", "1", "--matrix", d1.as_str(), "--functions", "x,y,x+y"];
    let (code, out) = termlab(&args);
    assert_eq!(code, 1);
    assert!(out.starts_with("counterexample"), "{out}");
    let d2 = corpus("prog5_d2_printed.mat");
    let args = ["audit", p.as_str(), "--case", "2", "--matrix", d2.as_str(), "--functions", "x,y,x+y"];
    assert_eq!(termlab(&args).0, 0);
}

#[test]
fn ramsey_queries() {
    let pentagon = corpus("pentagon.col");
    assert_eq!(termlab(&["ramsey", "search-homog", &pentagon, "3"]).0, 1);
    assert_eq!(termlab(&["ramsey", "check-transitive", &pentagon]).0, 1);
    let (_, out) = termlab(&["ramsey", "mip", &pentagon]);
    assert_eq!(out, "longest MIP: length 5, color 1, path 1 2 3 4 5\n");
    assert_eq!(termlab(&["ramsey", "trt-build", "3", "2"]).0, 0);
    let (_, out) = termlab(&["ramsey", "monotone", "3", "5,-1,4,2,3,0"]);
    assert_eq!(out, "decreasing: 5 4 2 (length 3)\n");
}

#[test]
fn bad_input_exits_2() {
    let p = corpus("prog4.tl");
    for args in [
        vec!["analyze", "/nonexistent.tl"],
        vec!["analyze", p.as_str(), "--clamp", "0"],
        vec!["analyze", p.as_str(), "--functions", "x +"],
        vec!["analyze", p.as_str(), "--criterion", "C"],
        vec!["segments", p.as_str(), "--box", "5..1"],
        vec!["simulate", p.as_str(), "--start", "1,2"],
        vec!["matrix", "mul", p.as_str(), p.as_str()],
        vec!["ramsey", "trt-size", "1", "2"],
        vec!["frobnicate"],
    ] {
        let (code, out) = termlab(&args);
        assert_eq!(code, 2, "{args:?}: {out}");
    }
}
