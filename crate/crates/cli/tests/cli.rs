use std::io::Write;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn cyclepack(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cyclepack"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut input = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        input.write_all(text.as_bytes()).unwrap();
    }
    drop(input);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn gen_then_pack_from_stdin() {
    let k9 = cyclepack(&["gen", "complete", "9"], None);
    assert_eq!(code(&k9), 0);
    let out = cyclepack(&["pack", "--k", "3", "--r", "3", "-"], Some(&stdout(&k9)));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("success: 3 disjoint cycles"));
    assert_eq!(text.lines().skip(1).filter(|l| l.split(' ').count() == 3).count(), 3);
}

#[test]
fn pack_then_verify_and_tamper() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    let cert = dir.path().join("cert.json");
    let trace = dir.path().join("trace.json");
    std::fs::write(&graph, stdout(&cyclepack(&["gen", "complete", "12"], None))).unwrap();
    let g = graph.to_str().unwrap();
    let out = cyclepack(
        &["pack", "--k", "3", "--r", "4", "--format", "json", "--trace", trace.to_str().unwrap(), g],
        None,
    );
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["k"], 3);
    assert_eq!(json["r"], 4);
    std::fs::write(&cert, stdout(&out)).unwrap();
    let trace_json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(trace_json.as_array().unwrap().iter().all(|t| t.get("potential_after").is_some()));

    let c = cert.to_str().unwrap();
    assert_eq!(code(&cyclepack(&["verify", "--k", "3", "--r", "4", "--cert", c, g], None)), 0);
    assert_eq!(code(&cyclepack(&["verify", "--k", "4", "--r", "4", "--cert", c, g], None)), 1);

    let mut tampered = json.clone();
    let first = tampered["cycles"][1][0].clone();
    tampered["cycles"][0][0] = first;
    std::fs::write(&cert, tampered.to_string()).unwrap();
    assert_eq!(code(&cyclepack(&["verify", "--k", "3", "--r", "4", "--cert", c, g], None)), 1);
}

#[test]
fn stuck_exit_code() {
    let g = stdout(&cyclepack(&["gen", "bipartite", "6", "3"], None));
    let out = cyclepack(&["pack", "--k", "2", "--r", "3", "--no-minimalize", "-"], Some(&g));
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).starts_with("stuck: no move applies"));
    let json = cyclepack(&["pack", "--k", "2", "--r", "3", "--format", "json", "-"], Some(&g));
    let diag: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(diag["reason"], "no move applies");
}

#[test]
fn ineq_check_table() {
    let out = cyclepack(&["ineq-check", "--kminus1-range", "1..10"], None);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split_whitespace().collect();
        let km1: u32 = cols[0].parse().unwrap();
        assert_eq!(cols[2] == "true", km1 <= 4, "{line}");
        assert_eq!(cols[4], "ok");
    }
    let json = cyclepack(&["ineq-check", "--kminus1-range", "5..6", "--format", "json"], None);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(rows[0]["system"], "quadratic");
    assert_eq!(rows[1]["feasible"], false);
}

#[test]
fn minimalize_outputs_minor_and_history() {
    let dir = TempDir::new().unwrap();
    let hist = dir.path().join("h.txt");
    let input = "0 1\n1 2\n0 2\n0 3\n1 3\n2 3\n3 4\n";
    let inline = cyclepack(&["minimalize", "-"], Some(input));
    assert_eq!(code(&inline), 0);
    let text = stdout(&inline);
    assert!(text.lines().any(|l| l == "# D 4"));
    let separate = cyclepack(&["minimalize", "-", "--history", hist.to_str().unwrap()], Some(input));
    assert_eq!(stdout(&separate), "0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    assert!(std::fs::read_to_string(&hist).unwrap().contains("D 4"));
}

#[test]
fn gen_families() {
    for args in [
        vec!["gen", "split", "2", "4", "6"],
        vec!["gen", "split-matched", "2", "3", "4"],
        vec!["gen", "cliques", "3", "2"],
        vec!["gen", "cycles", "2", "3"],
        vec!["gen", "cycle", "5"],
        vec!["gen", "petersen"],
    ] {
        assert_eq!(code(&cyclepack(&args, None)), 0, "{args:?}");
    }
    let a = cyclepack(&["gen", "gnp", "20", "0.3", "--seed", "4"], None);
    let b = cyclepack(&["gen", "gnp", "20", "0.3", "--seed", "4"], None);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(code(&cyclepack(&["gen", "split-matched", "2", "3", "3"], None)), 64);
}

#[test]
fn lemma_check_suites() {
    for lemma in ["1", "2", "4"] {
        let out = cyclepack(&["lemma-check", "--lemma", lemma, "--exhaustive-up-to", "8"], None);
        assert_eq!(code(&out), 0, "{}", stdout(&out));
    }
    let sampled = cyclepack(&["lemma-check", "--lemma", "3", "--samples", "200", "--seed", "3", "--format", "json"], None);
    assert_eq!(code(&sampled), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&sampled)).unwrap();
    assert_eq!(report["instances"], 600);
    assert_eq!(code(&cyclepack(&["lemma-check", "--lemma", "5"], None)), 64);
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&cyclepack(&["pack", "--k", "2"], None)), 64);
    assert_eq!(code(&cyclepack(&["bogus"], None)), 64);
    assert_eq!(code(&cyclepack(&["pack", "--k", "2", "--r", "3", "/nonexistent/graph"], None)), 66);
    assert_eq!(code(&cyclepack(&["pack", "--k", "2", "--r", "3", "-"], Some("0 x\n"))), 64);
    assert_eq!(code(&cyclepack(&["pack", "--k", "2", "--r", "2", "-"], Some("0 1\n"))), 64);
    assert_eq!(code(&cyclepack(&["ineq-check", "--kminus1-range", "4"], None)), 64);
    assert_eq!(code(&cyclepack(&["--help"], None)), 0);
}
