//! End-to-end runs of the `corolla` binary on the shipped data files.

use std::path::PathBuf;
use std::process::{Command, Output};

use corolla_core::corolla::{apply_differential, corolla, corolla_differential, Variant};
use corolla_core::expr::json::from_json;
use corolla_core::expr::Expression;
use corolla_core::graph::parse_graph;
use corolla_core::parametric::{automatic_routing, first_symanzik, parse_routing};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).to_string_lossy().into_owned()
}

fn corolla_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corolla")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = corolla_bin(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    corolla_bin(args).status.code().unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("corolla-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn symanzik_text() {
    let out = stdout(&["symanzik", &data("graphs/one-loop.graph")]);
    assert_eq!(out, "psi = A1 + A2\nphi = (xi1 - xi2)^2 A1 A2\n");
}

#[test]
fn ghost_order_beyond_loops_is_zero() {
    let out = stdout(&["corolla", &data("graphs/one-loop.graph"), "--ghost-order", "2"]);
    assert_eq!(out.trim(), "0");
}

#[test]
fn gauge_labeling_table() {
    let out = stdout(&["ew-gauge", &data("graphs/one-loop.graph")]);
    assert!(out.contains("labelings: 8"), "{out}");
    assert_eq!(out.matches("sym*iso 2").count(), 8, "{out}");
}

#[test]
fn scalar_labelings_with_uniform_externals() {
    let out = stdout(&[
        "ew-scalar",
        &data("graphs/one-loop.graph"),
        "--rules",
        &data("rules/standard-model.rules"),
        "--scalar",
        "1",
        "--externals",
        "uniform",
    ]);
    for c in ["e^2 mW^2", "g^2 mW^2", "g^2 mZ^2 sW^4", "g^2 mZ^2/cW^2"] {
        assert!(out.contains(c), "{c}\n{out}");
    }
}

#[test]
fn exit_codes() {
    let graph = data("graphs/one-loop.graph");
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["symanzik"]), 1);
    assert_eq!(code(&["symanzik", "/nonexistent/graph"]), 1);
    assert_eq!(code(&["ew-scalar", &graph]), 1);
    assert_eq!(code(&["symanzik", &scratch("unknown.graph", "v a\ne 1 a b\n")]), 2);
    assert_eq!(code(&["ew-scalar", &graph, "--rules", &scratch("bad.rules", "rule 3 W,W,Z = 1/0\n")]), 2);
    assert_eq!(code(&["symanzik", &scratch("valence.graph", "v a\nv b\ne 1 a b\nx 2 a\nx 3 a\nx 4 b\n")]), 3);
    assert_eq!(code(&["diff", &graph, "--routing", &scratch("leak.route", "route 1 = q\n")]), 3);
    assert_eq!(code(&["resreg", &graph, "--shrink", "3"]), 3);
}

#[test]
fn output_is_deterministic() {
    for cmd in ["integrand", "corolla", "diff", "ew-gauge", "enumerate"] {
        let args = [cmd, &data("graphs/one-loop.graph"), "--routing", &data("routing/one-loop.route")];
        let args: Vec<&str> = if cmd == "integrand" || cmd == "diff" { args.to_vec() } else { args[..2].to_vec() };
        assert_eq!(stdout(&args), stdout(&args), "{cmd}");
    }
}

#[test]
fn json_matches_library() {
    let text = std::fs::read_to_string(data("graphs/one-loop.graph")).unwrap();
    let g = parse_graph(&text).unwrap();

    let out = stdout(&["symanzik", &data("graphs/one-loop.graph"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let psi = from_json(&v["psi"].to_string()).unwrap();
    assert_eq!(psi, Expression::from_poly(first_symanzik(&g).unwrap()));

    let route = std::fs::read_to_string(data("routing/one-loop.route")).unwrap();
    let routing = parse_routing(&route, &g, &automatic_routing(&g)).unwrap();
    let d = corolla_differential(&g, &corolla(&g, Variant::Qcd));
    let expected = apply_differential(&g, &d, &routing).unwrap().gauge_factor;
    let out = stdout(&[
        "diff",
        &data("graphs/one-loop.graph"),
        "--routing",
        &data("routing/one-loop.route"),
        "--format",
        "json",
    ]);
    assert_eq!(from_json(out.trim()).unwrap(), expected);
}

#[test]
fn latex_output_renders() {
    let out = stdout(&["symanzik", &data("graphs/one-loop.graph"), "--format", "latex"]);
    assert!(out.contains("A_{1}") || out.contains("A_1"), "{out}");
}
