use std::io::Write;
use std::process::{Command, Output, Stdio};

fn archer(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_archer"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn repl_golden_output() {
    let script = "g 4 0 1 0 2 0 3 2 3\na 0 1 2\na 1 2 1\na 2 3 2\n";
    let out = archer(&["repl"], script);
    assert!(out.status.success());
    let text = stdout(&out);
    let last_block: Vec<&str> = text.lines().rev().take(8).collect::<Vec<_>>().into_iter().rev().collect();
    assert_eq!(
        last_block,
        [
            "Vertex 0: 12",
            "Vertex 1: 15",
            "Vertex 2: 13",
            "Vertex 3: 14",
            "Arc 0 (0 1 2): 17 20",
            "Arc 1 (1 2 1): 16",
            "Arc 2 (2 3 2): 18 19",
            "[12--20]",
        ]
    );
    assert!(!text.contains(">>"), "no prompt when stdin is not a terminal");
}

#[test]
fn repl_log_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("session.log");
    let log_arg = log.to_str().unwrap();
    let out = archer(&["repl", "--log", log_arg], "g 4 0 1 0 2 0 3 2 3\nnope\na 0 1 2\nx\n");
    assert!(out.status.success());
    assert!(stdout(&out).contains("error: unknown command"));
    let logged = std::fs::read_to_string(&log).unwrap();
    assert_eq!(logged, "g 4 0 1 0 2 0 3 2 3\na 0 1 2\nx\n");

    std::fs::write(&log, "g 4 0 1 0 2 0 3 2 3\na 0 1 2\n").unwrap();
    let out = archer(&["repl", "--replay", log_arg], "a 1 2 1\na 2 3 2\n");
    assert!(stdout(&out).ends_with("[12--20]\n"));
}

#[test]
fn families_build_formats() {
    let out = archer(&["families", "build", "--tag", "G3", "--params", "2"], "");
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "g 8 0 1 0 2 1 2 3 4 3 6 4 5 4 7 6 7\na 1 3 2\na 2 4 2\n"
    );
    let out = archer(&["families", "build", "--tag", "dob", "--params", "3", "--format", "profile"], "");
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["spectrum"], "[13--23]");
    assert_eq!(doc["iti"], true);
    let out = archer(&["families", "build", "--tag", "G4", "--params", "1,4", "--format", "g6"], "");
    assert!(out.status.success());
    let g = tigraph::parse_graph6(stdout(&out).trim()).unwrap();
    assert_eq!(g.order(), 12);
    let out = archer(&["families", "build", "--tag", "G1", "--params", "1"], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("below the minimum"));
}

#[test]
fn cycle_chords_search() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("reps.g6");
    let out = archer(
        &["search", "cycle-chords", "--n", "9", "--chords", "3", "--predicate", "iti", "--emit", emit.to_str().unwrap()],
        "",
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("classes=1\n"));
    assert!(text.contains("visited=2925\n"));
    assert_eq!(std::fs::read_to_string(&emit).unwrap().lines().count(), 1);

    let out = archer(&["search", "cycle-chords", "--n", "15", "--chords", "6"], "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("long-run"));
}

#[test]
fn census_and_conjecture() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let iti = dir.path().join("iti.g6");
    let out = archer(
        &[
            "search",
            "census",
            "--in",
            "-",
            "--json",
            json.to_str().unwrap(),
            "--emit-iti",
            iti.to_str().unwrap(),
        ],
        "C~\nBw\nbad line\nCK\n",
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("order=4 connected=1 ti=0 mti=0 iti=0"));
    assert!(text.contains("disconnected=1"));
    assert!(text.contains("malformed.line=3"));

    let out = archer(&["search", "conjecture", "--in", json.to_str().unwrap()], "");
    assert!(out.status.success());
    assert!(stdout(&out).contains("findings=0"));
}
