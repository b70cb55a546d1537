use std::path::{Path, PathBuf};
use std::process::Command;

use irw_core::rewrite::parse_trs;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.tm"))
}

/// Runs `irw` and returns (exit code, stdout).
fn irw(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_irw"))
        .args(args)
        .env_remove("IRW_SEED")
        .output()
        .expect("irw runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn last_line(s: &str) -> &str {
    s.lines().last().unwrap_or("")
}

fn compile_to(dir: &Path, args: &[&str], name: &str) -> PathBuf {
    let out = dir.join(name);
    let mut all = args.to_vec();
    all.extend(["-o", out.to_str().unwrap()]);
    let (code, stdout) = irw(&all);
    assert_eq!(code, 0, "{stdout}");
    out
}

#[test]
fn compile_pickn_writes_three_rules() {
    let dir = tempfile::tempdir().unwrap();
    let path = compile_to(dir.path(), &["compile", "pickn"], "pickn.trs");
    let file = parse_trs(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file.trs.len(), 3);
    assert_eq!(file.header_value("construction"), Some("pickn"));
}

#[test]
fn compile_s_has_run_rule_and_pickn() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixture("m_acc");
    let path = compile_to(dir.path(), &["compile", "S", m.to_str().unwrap()], "s.trs");
    let file = parse_trs(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(file.trs.rule("run").is_some());
    assert!(file.trs.rules().iter().any(|r| r.id.starts_with("c.")));
}

#[test]
fn as_printed_warns() {
    let out = Command::new(env!("CARGO_BIN_EXE_irw"))
        .args([
            "compile",
            "R",
            fixture("nd_pong").to_str().unwrap(),
            "--as-printed",
        ])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("-> run(xi, q0(z), D1(z), D1(z))"),
        "{stdout}"
    );
    assert!(String::from_utf8(out.stderr).unwrap().contains("warning:"));
}

#[test]
fn tm_commands() {
    let m_acc = fixture("m_acc");
    let (code, out) = irw(&[
        "tm",
        "rel",
        m_acc.to_str().unwrap(),
        "--pair",
        "2",
        "3",
        "--fuel",
        "100",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("halted after 5 steps"), "{out}");
    assert_eq!(last_line(&out), "VERDICT: holds");
    assert!(out.starts_with("0: 0 S S q0 S S S 0\n"), "{out}");

    let (code, out) = irw(&[
        "tm",
        "rel",
        fixture("m_rej").to_str().unwrap(),
        "--pair",
        "2",
        "3",
    ]);
    assert_eq!((code, last_line(&out)), (1, "VERDICT: fails"));

    let (code, out) = irw(&[
        "tm",
        "fun",
        fixture("halt_now").to_str().unwrap(),
        "--arg",
        "3",
    ]);
    assert_eq!((code, last_line(&out)), (0, "VERDICT: 3"));

    let (code, out) = irw(&["tm", "run", "m_ext", "--fuel", "20"]);
    assert_eq!((code, last_line(&out)), (2, "VERDICT: unknown"));
}

#[test]
fn trs_reach_and_normalize() {
    let dir = tempfile::tempdir().unwrap();
    let pickn = compile_to(dir.path(), &["compile", "pickn"], "pickn.trs");
    let (code, out) = irw(&[
        "trs",
        "reach",
        pickn.to_str().unwrap(),
        "--from",
        "pickn",
        "--to",
        "ok(S(S(S(0(end)))))",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("reached in 7 steps"), "{out}");

    let r = compile_to(
        dir.path(),
        &["compile", "R", fixture("nd_right").to_str().unwrap()],
        "r_right.trs",
    );
    let (code, out) = irw(&[
        "trs",
        "normalize",
        r.to_str().unwrap(),
        "--term",
        "run(xi,q0(rec X. a(X)),D1(rec X. a(X)),D2(rec X. a(X)))",
        "--epochs",
        "3",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(": bot\n"), "{out}");
    assert_eq!(last_line(&out), "VERDICT: found");
}

#[test]
fn greedy_trace_shows_pebble_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let s = compile_to(dir.path(), &["compile", "Sprime", "m_acc"], "sprime.trs");
    let (code, out) = irw(&[
        "trs",
        "trace",
        s.to_str().unwrap(),
        "--term",
        "run(T,pickn,pickn)",
        "--strategy",
        "greedy",
        "--fuel",
        "2000",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("peb(peb(peb(peb(peb("), "{out}");
}

#[test]
fn omega_membership() {
    let (code, out) = irw(&[
        "omega",
        "member",
        fixture("nd_right").to_str().unwrap(),
        "--word",
        "(a)^w",
    ]);
    assert_eq!((code, last_line(&out)), (0, "VERDICT: accepted"));
    let (code, out) = irw(&[
        "omega",
        "member",
        fixture("nd_pong").to_str().unwrap(),
        "--word",
        "(a)^w",
    ]);
    assert_eq!((code, last_line(&out)), (1, "VERDICT: rejected_exhausted"));
    let (code, _) = irw(&[
        "omega", "classify", "nd_two", "--word", "ab(ba)^w", "--fuel", "1",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn laws_report_verdicts() {
    let (code, out) = irw(&["laws", "pickn", "--samples", "10"]);
    assert_eq!((code, last_line(&out)), (0, "VERDICT: holds"));
    let (code, out) = irw(&[
        "laws",
        "run-cycles",
        "--fixture",
        "m_acc",
        "--firings",
        "2",
        "--fuel",
        "0",
    ]);
    assert_eq!((code, last_line(&out)), (2, "VERDICT: unknown"));
}

#[test]
fn laws_are_deterministic_per_seed() {
    let args = ["laws", "two-sided", "--samples", "20", "--seed", "7"];
    assert_eq!(irw(&args), irw(&args));
    let with_env = Command::new(env!("CARGO_BIN_EXE_irw"))
        .args(["laws", "two-sided", "--samples", "20"])
        .env("IRW_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), irw(&args).1);
}

#[test]
fn input_errors_exit_3() {
    assert_eq!(irw(&["tm", "run", "no_such_machine.tm"]).0, 3);
    assert_eq!(irw(&["compile", "T", "m_acc"]).0, 3);
    assert_eq!(irw(&["omega", "member", "m_acc", "--word", "(a)^w"]).0, 3);
    assert_eq!(irw(&["omega", "member", "nd_right", "--word", "a("]).0, 3);
    assert_eq!(irw(&["frobnicate"]).0, 3);
}
