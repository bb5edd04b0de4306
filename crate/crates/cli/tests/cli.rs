use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn rbt(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rbt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn f8_round_trips_through_fcheck() {
    let inst = rbt(&["gen", "--f4k", "2"], "");
    assert_eq!(inst.status.code(), Some(0));
    let out = rbt(&["fcheck"], &stdout(&inst));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "F");
}

#[test]
fn random_instance_is_not_f() {
    let inst = rbt(&["gen", "--k", "3", "--seed", "1"], "");
    assert_eq!(stdout(&rbt(&["fcheck"], &stdout(&inst))).trim(), "not-F");
}

#[test]
fn f12_has_no_six_cycle_factor() {
    let inst = rbt(&["gen", "--f4k", "3"], "");
    let out = rbt(&["oracle", "--p", "3"], &stdout(&inst));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out).trim(), "none");
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let inst = stdout(&rbt(&["gen", "--k", "4", "--seed", "7"], ""));
    let path = write(dir.path(), "inst.txt", &inst);
    let cert = rbt(&["solve", "--p", "3", "--input", &path], "");
    assert_eq!(cert.status.code(), Some(0));
    let out = rbt(&["verify", "--instance", &path], &stdout(&cert));
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).trim(), "ok");
}

#[test]
fn tampered_certificate_is_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let inst = stdout(&rbt(&["gen", "--k", "3", "--seed", "2"], ""));
    let path = write(dir.path(), "inst.txt", &inst);
    let cert = stdout(&rbt(&["solve", "--p", "2", "--input", &path], ""));
    let mut json: serde_json::Value = serde_json::from_str(&cert).unwrap();
    json["cycle_2p"].as_array_mut().unwrap().reverse();
    let out = rbt(&["verify", "--instance", &path], &json.to_string());
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("is not an arc"));
}

#[test]
fn solving_f_is_excluded() {
    let inst = stdout(&rbt(&["gen", "--f4k", "3"], ""));
    assert_eq!(rbt(&["solve", "--p", "2"], &inst).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_3() {
    assert_eq!(rbt(&["fcheck"], "k 1\n10\n").status.code(), Some(3));
    assert_eq!(rbt(&["solve", "--p", "2"], "k 2\n1100\n").status.code(), Some(3));
    assert_eq!(rbt(&["frobnicate"], "").status.code(), Some(3));
    assert_eq!(rbt(&["solve", "--p", "2", "--colour"], "").status.code(), Some(3));
    let inst = stdout(&rbt(&["gen", "--k", "3"], ""));
    assert_eq!(rbt(&["solve", "--p", "9"], &inst).status.code(), Some(3));
}

#[test]
fn enumerate_reports_every_instance() {
    let out = rbt(&["enumerate", "--k", "2", "--p", "2", "--workers", "2"], "");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 91);
    assert!(lines.iter().take(90).all(|l| l.starts_with("idx=") && l.contains(" p=2 ms=")));
    assert!(lines[90].contains("runs=90") && lines[90].contains("falsified=0"));
}

#[test]
fn enumerate_resumes_from_cursor() {
    let dir = tempfile::tempdir().unwrap();
    let cursor = dir.path().join("cursor");
    let c = cursor.to_str().unwrap();
    let first = rbt(&["enumerate", "--k", "2", "--p", "2", "--cursor", c], "");
    assert_eq!(first.status.code(), Some(0));
    // a finished run leaves nothing to do
    let again = stdout(&rbt(&["enumerate", "--k", "2", "--p", "2", "--cursor", c], ""));
    assert_eq!(again.lines().count(), 1);
    assert!(again.contains("resumed_from=90") && again.contains("runs=90"));
}

#[test]
fn pipelines_are_deterministic() {
    let a = stdout(&rbt(&["gen", "--k", "5", "--seed", "3"], ""));
    let b = stdout(&rbt(&["gen", "--k", "5", "--seed", "3"], ""));
    assert_eq!(a, b);
    let ca = stdout(&rbt(&["solve", "--p", "4"], &a));
    let cb = stdout(&rbt(&["solve", "--p", "4"], &b));
    assert_eq!(ca, cb);
}

#[test]
fn trace_prints_the_step_log() {
    let inst = stdout(&rbt(&["gen", "--k", "5", "--seed", "4"], ""));
    let out = rbt(&["solve", "--p", "5", "--trace"], &inst);
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("base p=3"));
    assert!(err.contains("steps=2"));
}
