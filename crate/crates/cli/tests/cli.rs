use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn origami(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_origami")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn run_prints_a_summary() {
    let out = origami(&["run", fixture("squash.ori").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "10 steps; faces {4,6,10,11,14,15}\n");
}

#[test]
fn trace_lists_every_step() {
    let out = origami(&["run", "--trace", fixture("squash.ori").to_str().unwrap()]);
    let text = stdout(&out);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[0], "O1: paper square A B C D");
    assert!(lines[9].starts_with("O10: squash {10,11}") && lines[9].ends_with("[5/5] glue"));
}

#[test]
fn emits_one_file_set_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = origami(&[
        "run",
        fixture("squash.ori").to_str().unwrap(),
        "--emit-svg",
        d,
        "--emit-dot",
        d,
        "--emit-json",
        d,
        "--emit-3d",
        d,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 50);
    for k in 1..=10 {
        for suffix in [".svg", "-adjacency.dot", "-superposition.dot", ".json", "-3d.json"] {
            let name = format!("step-{k:02}{suffix}");
            assert!(names.contains(&name), "missing {name}");
        }
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("step-05-3d.json")).unwrap()).unwrap();
    assert_eq!(json["faces"].as_array().unwrap().len(), 6);
}

#[test]
fn graphs_prints_both_relations() {
    let out = origami(&["graphs", fixture("squash.ori").to_str().unwrap(), "--step", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "graph adjacency {\n  1;\n}\ndigraph superposition {\n  1;\n}\n");
    let out = origami(&["graphs", fixture("squash.ori").to_str().unwrap(), "--step", "11"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn check_reports_each_invariant() {
    let out = origami(&["check", fixture("house.ori").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn check_fails_when_a_cut_is_left_open() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("open.ori");
    fs::write(&path, "paper square A B C D\nfold valley along ray(A, C)\ncut {2,3}\n").unwrap();
    let out = origami(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL cut register is empty at the end"));
}

#[test]
fn script_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ori");
    fs::write(&path, "paper square A B C D\nfold valley along ray(A, Z)\n").unwrap();
    let out = origami(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad.ori:2: step 2: unknown point `Z`"), "{}", stderr(&out));

    fs::write(&path, "paper square A B C D\nfold sideways\n").unwrap();
    let out = origami(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("bad.ori:2:"));
    assert!(stderr(&out).contains("syntax error"));
}

#[test]
fn missing_file_exits_with_two() {
    let out = origami(&["run", "/nonexistent/script.ori"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error: /nonexistent/script.ori"));
}
