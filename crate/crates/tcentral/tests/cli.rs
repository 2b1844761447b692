//! End-to-end checks of the binary: flag validation, exit codes, output
//! shapes.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcentral"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_graph(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path.to_str().unwrap().to_string()
}

const FIGURE1: &str = "\
target v3
node s1 1
node s2 2
edge s1 v1
edge s2 v2 2
edge v1 v3
edge v2 v3
edge v3 v2
";

#[test]
fn compute_betweenness_text_output() {
    let path = write_graph("cli_fig1.graph", FIGURE1);
    let out = run(&["compute", "--graph", &path, "--measure", "betweenness"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines, vec!["s1 1", "s2 2", "v1 1", "v2 2", "v3 3"]);
}

#[test]
fn compute_pagerank_json_output() {
    let path = write_graph("cli_fig1_json.graph", FIGURE1);
    let out = run(&[
        "compute", "--graph", &path, "--measure", "pagerank", "--alpha", "0.5", "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["measure"], "pagerank");
    assert_eq!(v["alpha"], 0.5);
    assert_eq!(v["target"], "v3");
    assert!(v["values"]["s1"].is_number());
}

#[test]
fn compute_flag_errors_exit_2() {
    let path = write_graph("cli_flags.graph", "target t\nnode s 1\nedge s t\n");
    let out = run(&["compute", "--graph", &path, "--measure", "pagerank"]);
    assert_eq!(out.status.code(), Some(2), "pagerank without alpha");
    let out = run(&[
        "compute", "--graph", &path, "--measure", "pagerank", "--alpha", "1.0",
    ]);
    assert_eq!(out.status.code(), Some(2), "alpha out of range");
    let out = run(&["compute", "--graph", &path, "--measure", "stress", "--alpha", "0.5"]);
    assert_eq!(out.status.code(), Some(2), "alpha with non-pagerank measure");
    let out = run(&["compute", "--graph", &path, "--measure", "nonsense"]);
    assert_eq!(out.status.code(), Some(2), "unknown measure");
}

#[test]
fn compute_parse_errors_exit_3() {
    let path = write_graph("cli_bad.graph", "node s 1\nedge s t\n");
    let out = run(&["compute", "--graph", &path, "--measure", "stress"]);
    assert_eq!(out.status.code(), Some(3), "missing target");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("target"), "diagnostic names the problem: {stderr}");

    let path = write_graph("cli_stranded.graph", "target t\nnode s 1\n");
    let out = run(&["compute", "--graph", &path, "--measure", "stress"]);
    assert_eq!(out.status.code(), Some(3), "node cannot reach target");

    let out = run(&["compute", "--graph", "/nonexistent.graph", "--measure", "stress"]);
    assert_eq!(out.status.code(), Some(3), "unreadable file");
}

#[test]
fn axioms_quick_run_matches() {
    // Few trials per cell: the expected-holding cells only need one
    // applicable trial and the failing cells are refuted by the built-in
    // shapes, so the matrix still matches.
    let out = run(&["axioms", "--trials", "10", "--max-nodes", "5"]);
    assert!(out.status.success(), "exit: {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("matrix matches expected: true"), "{stdout}");
    assert!(stdout.contains("direct-link-domination"));
}

#[test]
fn axioms_json_output() {
    let out = run(&["axioms", "--trials", "5", "--max-nodes", "4", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["matches_expected"], true);
    assert_eq!(v["cells"].as_array().unwrap().len(), 32);
    assert_eq!(v["baseline"].as_array().unwrap().len(), 4);
}

#[test]
fn counterexample_exit_codes() {
    let out = run(&["counterexample", "--axiom", "edge-swap", "--measure", "betweenness"]);
    assert!(out.status.success(), "witness expected");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["instance"].is_object());
    assert!(v["delta"].as_f64().unwrap() > 0.0);

    let out = run(&["counterexample", "--axiom", "locality", "--measure", "stress"]);
    assert_eq!(out.status.code(), Some(2), "expected-holding cell is refused");

    // Lemmas hold, so the search comes up empty.
    let out = run(&[
        "counterexample", "--axiom", "anonymity", "--measure", "stress", "--trials", "5",
    ]);
    assert_eq!(out.status.code(), Some(1), "search exhausted");
}

#[test]
fn oracle_agreement_and_exit() {
    let path = write_graph("cli_oracle.graph", FIGURE1);
    for args in [
        vec!["oracle", "--graph", path.as_str(), "--measure", "stress"],
        vec!["oracle", "--graph", path.as_str(), "--measure", "betweenness"],
        vec![
            "oracle", "--graph", path.as_str(), "--measure", "rwb", "--samples", "20000",
        ],
        vec![
            "oracle", "--graph", path.as_str(), "--measure", "pagerank", "--alpha", "0.85",
        ],
    ] {
        let out = run(&args);
        assert!(
            out.status.success(),
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
