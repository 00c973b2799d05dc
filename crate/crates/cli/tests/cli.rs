use std::path::Path;
use std::process::{Command, Output};

use aggression_core::codec;
use aggression_core::reduction::ColoredGraph;

fn aggression(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aggression"))
        .args(args)
        .env_remove("AGGRESSION_NODE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_prints_value_and_line() {
    let out = aggression(&["solve", "--family", "matching:2", "--troops", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("value: (0, -1)"), "{text}");
    assert!(text.contains("principal line: place 1@0"), "{text}");
}

#[test]
fn solve_json_is_a_document() {
    let out = aggression(&["solve", "--family", "cycle:3", "--lata", "2", "--raj", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["principal_line"].is_array());
}

#[test]
fn node_limit_exits_three() {
    let out = aggression(&["solve", "--family", "cycle:5", "-t", "4", "--node-limit", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_aggression"))
        .args(["solve", "--family", "cycle:5", "-t", "4"])
        .env("AGGRESSION_NODE_LIMIT", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(aggression(&["solve", "--family", "ring:4", "-t", "1"]).status.code(), Some(2));
    assert_eq!(aggression(&["solve", "--family", "cycle:4"]).status.code(), Some(2));
    assert_eq!(aggression(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn graph_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", r#"{"vertices": 3, "edges": [[0, 1], [1, 2]]}"#);
    let out = aggression(&["solve", "--graph", &g, "-t", "2", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = write(dir.path(), "bad.json", r#"{"vertices": 3, "edges": [[0, 1], [2, 2]]}"#);
    let out = aggression(&["solve", "--graph", &bad, "-t", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge #1"));
}

#[test]
fn verify_exit_code_follows_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let out = aggression(&[
        "verify",
        "--strategy",
        "raj_mirror_matching",
        "--family",
        "matching:3",
        "-t",
        "3",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = codec::parse_report(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r.holds);

    let out = aggression(&["verify", "--strategy", "raj_c5", "--family", "cycle:5", "-t", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let r = codec::parse_report(&stdout(&out)).unwrap();
    assert!(r.counterexample.is_some());

    let out = aggression(&[
        "verify", "--strategy", "raj_c5", "--family", "cycle:5", "-t", "4", "--mode", "repaired",
    ]);
    assert_eq!(out.status.code(), Some(0));

    // Outside the strategy's hypotheses.
    let out = aggression(&["verify", "--strategy", "raj_c5", "--family", "cycle:4", "-t", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reduce_then_respond() {
    let dir = tempfile::tempdir().unwrap();
    // k = 3 classes of n = 6; {0, 6, 12} is a clique.
    let g = ColoredGraph::blocks(3, 6, vec![(0, 6), (0, 12), (6, 12), (1, 7), (2, 13)]);
    let input = write(dir.path(), "g.json", &codec::to_json(&g));
    let inst = dir.path().join("inst.json");
    let out = aggression(&["reduce", "-i", &input, "-o", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let instance = codec::parse_instance(&std::fs::read_to_string(&inst).unwrap()).unwrap();

    let out = aggression(&["respond", "-i", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("yes"));
    let tau: Vec<Option<u32>> = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert!(!tau.is_empty());

    let idle = aggression(&["respond", "-i", inst.to_str().unwrap(), "--tau", ""]);
    assert_eq!(idle.status.code(), Some(0));
    assert!(stdout(&idle).starts_with("RajWin"));
    assert!(instance.raj_budget() > instance.lata_budget());

    // Without a clique Raj's plan cannot be answered.
    let g = ColoredGraph::blocks(3, 6, vec![(0, 6), (6, 12), (1, 7)]);
    let input = write(dir.path(), "g2.json", &codec::to_json(&g));
    let inst2 = dir.path().join("inst2.json");
    let out = aggression(&["reduce", "-i", &input, "-o", inst2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = aggression(&["respond", "-i", inst2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "no");
}

#[test]
fn equalized_reduction_has_equal_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let g = ColoredGraph::blocks(3, 6, vec![(0, 6), (0, 12), (6, 12)]);
    let input = write(dir.path(), "g.json", &codec::to_json(&g));
    let out = aggression(&["reduce", "-i", &input, "--equalize-budgets"]);
    assert_eq!(out.status.code(), Some(0));
    let inst = codec::parse_instance(&stdout(&out)).unwrap();
    assert_eq!(inst.lata_budget(), inst.raj_budget());
}

#[test]
fn replay_reports_the_final_score() {
    let dir = tempfile::tempdir().unwrap();
    let record = write(
        dir.path(),
        "game.json",
        r#"{
  "graph": {"vertices": 2, "edges": [[0, 1]]},
  "budgets": {"lata": 1, "raj": 2},
  "moves": [
    {"type": "place", "vertex": 0, "count": 1},
    {"type": "place", "vertex": 1, "count": 2},
    {"type": "pass_placement"},
    {"type": "pass_placement"},
    {"type": "pass_attack"},
    {"type": "attack", "vertex": 0},
    {"type": "pass_attack"},
    {"type": "pass_attack"}
  ]
}"#,
    );
    let out = aggression(&["play", "--replay", &record]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("RajWin: territories 0-1"), "{}", stdout(&out));

    let moves = write(dir.path(), "moves.json", r#"["place 1@0", "place 1@1", "attack 1"]"#);
    let out = aggression(&["play", "--replay", &moves, "--family", "matching:1", "-t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("move #2"));
}

#[test]
fn interactive_play_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_aggression"))
        .args(["play", "--family", "matching:1", "-t", "1", "--opponent", "solver"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"hint\nplace 1@0\nquit\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("hint: place 1@0"), "{text}");
    assert!(text.contains("opponent: place 1@1"), "{text}");
}
