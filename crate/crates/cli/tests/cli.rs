//! End-to-end tests for the `confcomp` binary.

use std::process::{Command, Output};

fn confcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_confcomp"))
        .args(args)
        .env_remove("CONFCOMP_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "--output",
        "json",
        "limit",
        "--kind",
        "sqrt",
        "--terms",
        "arith:start=1,step=1",
    ];
    let a = confcomp(&args);
    let b = confcomp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same argv must give identical bytes");
    let doc: serde_json::Value = serde_json::from_str(&stdout(&a)).expect("valid json");
    let value: f64 = doc["value"]
        .as_str()
        .expect("value is a decimal string")
        .parse()
        .expect("parses as f64");
    assert!((value - 1.7579327566180045).abs() < 1e-11, "kasner, got {value}");
}

#[test]
fn usage_errors_exit_2() {
    let out = confcomp(&["eval"]);
    assert_eq!(out.status.code(), Some(2));
    let out = confcomp(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1_with_error_name() {
    let out = confcomp(&["eval", "--kind", "sqrt", "--terms", "const:a=-3"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).expect("utf-8 stderr");
    assert!(err.starts_with("DomainError:"), "got {err:?}");
    assert!(out.stdout.is_empty(), "no partial output on failure");
}

#[test]
fn expand_cot_integer_terminates() {
    let out = confcomp(&["expand", "cot", "--x", "5", "--digits", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5 (terminated)");
}

#[test]
fn pi_catalan_matches_reference() {
    let out = confcomp(&["pi", "--method", "catalan", "--n", "20"]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().expect("decimal output");
    assert!((v - std::f64::consts::PI).abs() < 1e-10, "got {v}");
}

#[test]
fn pi_bounds_bracket_pi() {
    let out = confcomp(&["--output", "json", "pi", "--method", "bounds", "--n", "6"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let lo: f64 = doc["lower"].as_str().unwrap().parse().unwrap();
    let hi: f64 = doc["upper"].as_str().unwrap().parse().unwrap();
    assert!(lo < std::f64::consts::PI && std::f64::consts::PI < hi);
}

#[test]
fn corpus_run_passes() {
    let out = confcomp(&["corpus", "run"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(!text.contains("FAIL"), "corpus failures:\n{text}");
    let summary = text.lines().last().expect("summary line");
    let (passed, total) = summary
        .strip_prefix("passed ")
        .and_then(|s| s.split_once('/'))
        .expect("summary format");
    assert_eq!(passed, total);
}

#[test]
fn classify_all_reports_four_criteria() {
    let out = confcomp(&[
        "--output",
        "json",
        "classify",
        "--terms",
        "const:a=2",
        "--n",
        "24",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let reports = doc["reports"].as_array().expect("reports array");
    assert_eq!(reports.len(), 4);
    for r in reports {
        assert_ne!(r["verdict"].as_str(), Some("Diverges"));
    }
    assert_eq!(reports[0]["verdict"].as_str(), Some("Converges"));
}

#[test]
fn csv_trace_has_header_and_rows() {
    let out = confcomp(&[
        "--output",
        "csv",
        "eval",
        "--kind",
        "sqrt",
        "--terms",
        "const:a=2",
        "--depth",
        "5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("depth,value,delta"));
    assert_eq!(lines.count(), 6, "depth 5 is inclusive: rows 0..=5");
}

#[test]
fn constants_get_respects_precision_flag() {
    let out = confcomp(&["--precision", "192", "constants", "get", "golden"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.starts_with("1.6180339887498948482045868343656381177"),
        "got {text}"
    );
    let out = confcomp(&["constants", "get", "no-such-constant"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_trinomial_both_roots() {
    let a = confcomp(&[
        "--output", "json", "solve", "trinomial", "--m", "3", "--p", "-7", "--q", "7",
        "--algorithm", "a",
    ]);
    let b = confcomp(&[
        "--output", "json", "solve", "trinomial", "--m", "3", "--p", "-7", "--q", "7",
        "--algorithm", "b",
    ]);
    assert!(a.status.success() && b.status.success());
    let ra: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: serde_json::Value = serde_json::from_str(&stdout(&b)).unwrap();
    let root_a: f64 = ra["root"].as_str().unwrap().parse().unwrap();
    let root_b: f64 = rb["root"].as_str().unwrap().parse().unwrap();
    assert!((root_a - 1.356895867892209).abs() < 1e-9, "got {root_a}");
    assert!((root_b - 1.692021471630095).abs() < 1e-9, "got {root_b}");
    assert_eq!(ra["details"]["inside_bound"].as_bool(), Some(true));
    assert_eq!(rb["details"]["inside_bound"].as_bool(), Some(false));
}

#[test]
fn fixed_point_newton_needs_derivative_only_for_unknown_maps() {
    let out = confcomp(&[
        "solve",
        "fixed-point",
        "--map",
        "kepler:m=1,e=0.3",
        "--newton",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let root: f64 = text
        .split_whitespace()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .expect("root field");
    assert!((root - (1.0 + 0.3 * root.sin())).abs() < 1e-12);
}
