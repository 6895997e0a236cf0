//! End-to-end checks of the `grouplat` binary: subcommands, exit codes,
//! stdin input, DOT output, and the expansion budget override.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grouplat"))
}

fn write_task(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("grouplat-cli-{name}-{}.json", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn run_reads_stdin() {
    let mut child = bin()
        .args(["run", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"task":"shortest","alphabet":["a","b"],"subgroup":["a a","a b a^-1"]}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"w\":\"a^2\",\"length\":2}\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("timing:"));
}

#[test]
fn exit_codes() {
    // 0 for a negative answer.
    let path = write_task(
        "member",
        r#"{"task":"nilp-member","r":2,"subgroup":["x1 x1","x2"],"h":"x1^-1 x2^-1 x1 x2"}"#,
    );
    let out = bin().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"member\":false}\n"
    );

    // 2 for parse problems.
    let path = write_task("badgen", r#"{"task":"closest","alphabet":["a"],"subgroup":["q"],"g":"a"}"#);
    let out = bin().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // 3 for precondition violations.
    let path = write_task(
        "trivial",
        r#"{"task":"subdist","alphabet":["a"],"subgroup":[],"subgroup2":[]}"#,
    );
    let out = bin().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(3));

    // 2 for a missing file.
    let out = bin().args(["run", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dot_writes_files() {
    let path = write_task(
        "dot",
        r#"{"task":"geodesic","alphabet":["x1","x2"],"subgroup":["x1","x1 x2"],"w":"x2"}"#,
    );
    let out_path = std::env::temp_dir().join(format!("grouplat-cli-dot-{}.dot", std::process::id()));
    let out = bin()
        .args(["dot"])
        .arg(&path)
        .arg("-o")
        .arg(&out_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&out_path).unwrap();
    assert!(dot.starts_with("digraph bouquet"));
    assert!(dot.contains("x2 (2)"), "completed shortcut annotated: {dot}");

    // Without -o the DOT text goes to stdout, deterministically.
    let first = bin().args(["dot"]).arg(&path).output().unwrap();
    let second = bin().args(["dot"]).arg(&path).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(String::from_utf8_lossy(&first.stdout), dot);
}

#[test]
fn oracle_subcommand_with_budget() {
    let path = write_task(
        "oracle",
        r#"{"task":"subdist","alphabet":["a","b"],"subgroup":["a"],"subgroup2":["a b"]}"#,
    );
    let out = bin()
        .args(["oracle", "--budget", "4"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "{\"distance\":1}\n");
}

#[test]
fn expand_budget_env_var() {
    // h1^(2^k) factorizations blow the expansion budget when it is tiny;
    // the answer still reports the exact length.
    let path = write_task(
        "budget",
        r#"{"task":"geodesic","alphabet":["a"],"subgroup":["a"],"w":"a^16"}"#,
    );
    let out = bin()
        .env("GROUPLAT_EXPAND_BUDGET", "4")
        .args(["run"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"factorization\":null,\"k\":16}\n"
    );

    let out = bin().args(["run"]).arg(&path).output().unwrap();
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"factorization\":\"h1^16\",\"k\":16}\n"
    );
}

#[test]
fn compact_flag() {
    let path = write_task(
        "compact",
        r#"{"task":"closest","alphabet":["a","b"],"subgroup":["abA"],"g":"ab"}"#,
    );
    let out = bin().args(["run", "--compact"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"h\":\"abA\",\"distance\":1}\n"
    );
}

#[test]
fn usage_on_bad_invocation() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate", "x.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
