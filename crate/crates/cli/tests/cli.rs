use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn syncong(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syncong"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Writes `Q_n` as emitted by the binary into a fresh directory.
fn qn_file(dir: &TempDir, n: usize) -> PathBuf {
    let out = syncong(&["qomega", &n.to_string(), "--emit"]);
    assert_eq!(code(&out), 0);
    let path = dir.path().join(format!("q{n}.alg"));
    std::fs::write(&path, out.stdout).unwrap();
    path
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// The `--recheck` token printed by a refuting `check` run.
fn recheck_token(text: &str) -> String {
    let line = text
        .lines()
        .find(|l| l.starts_with("recheck: --recheck "))
        .expect("recheck line");
    line.trim_start_matches("recheck: --recheck ")
        .trim_matches('\'')
        .to_string()
}

#[test]
fn info_reports_signature_and_checksums() {
    let dir = TempDir::new().unwrap();
    let q2 = qn_file(&dir, 2);
    let out = syncong(&["info", s(&q2)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("size 5, ops meet/2, prod/2, zero/0"),
        "{text}"
    );
    assert!(text.contains("labels: 0 a_0 b_0 a_1 b_1"), "{text}");
    // sha256 of the single entry "0"
    assert!(text
        .contains("sha256 zero: 5feceb66ffc86f38d952786c6d696c79c2dbc239dd4e91b46729d73a27fb57e9"));
}

#[test]
fn malformed_inputs_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad_arity = write(&dir, "bad.alg", "algebra z\nsize 2\nop f two\n0 1 1 0\n");
    let out = syncong(&["info", s(&bad_arity)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let empty = write(&dir, "empty.alg", "");
    assert_eq!(code(&syncong(&["info", s(&empty)])), 2);
    assert_eq!(
        code(&syncong(&["info", s(&dir.path().join("missing.alg"))])),
        2
    );
    assert_eq!(code(&syncong(&["frobnicate"])), 2);
    assert_eq!(code(&syncong(&["--cap", "0", "info", s(&empty)])), 2);

    let q2 = qn_file(&dir, 2);
    assert_eq!(code(&syncong(&["principal", s(&q2), "a_0-b_0"])), 2);
    assert_eq!(code(&syncong(&["principal", s(&q2), "a_0@c_9"])), 2);
    assert_eq!(code(&syncong(&["syn", s(&q2), "0 1 | 1 2"])), 2);
    assert_eq!(code(&syncong(&["check", s(&q2), "--terms", "frob(x)"])), 2);
}

#[test]
fn principal_congruences_of_q2() {
    let dir = TempDir::new().unwrap();
    let q2 = qn_file(&dir, 2);
    let out = syncong(&["principal", s(&q2), "a_0@b_0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "theta(a_0, b_0): 0 a_0 b_0 | a_1 | b_1\n");
    let out = syncong(&["principal", s(&q2), "3@4"]);
    assert_eq!(stdout(&out), "theta(a_1, b_1): 0 b_0 a_1 b_1 | a_0\n");

    let out = syncong(&["principal", s(&q2), "a_1@b_1", "--witness"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("chains reproduce theta: true"), "{text}");
    for pair in ["0@b_0", "0@a_1", "0@b_1", "b_0@a_1", "b_0@b_1", "a_1@b_1"] {
        assert!(
            text.contains(&format!("witness {pair}:")),
            "{pair} in {text}"
        );
    }
}

#[test]
fn syn_with_oracle() {
    let dir = TempDir::new().unwrap();
    let q2 = qn_file(&dir, 2);
    let out = syncong(&["syn", s(&q2), "a_0 b_0", "--oracle"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("syn: 0 | a_0 | b_0 | a_1 | b_1"), "{text}");
    assert!(text.contains("oracle agrees: true"));

    let q3 = qn_file(&dir, 3);
    // above the exhaustive cap the oracle refuses
    assert_eq!(code(&syncong(&["syn", s(&q3), "0 a_0", "--oracle"])), 3);
    assert_eq!(
        code(&syncong(&[
            "syn",
            s(&q3),
            "0 a_0",
            "--oracle",
            "--cap",
            "7"
        ])),
        0
    );
}

#[test]
fn every_refutation_rechecks() {
    let dir = TempDir::new().unwrap();
    let q4 = qn_file(&dir, 4);
    let q4 = s(&q4);
    let cases: [&[&str]; 4] = [
        &["--depth", "1"],
        &["--depth", "1", "--mode", "syntactic-principal"],
        &["--terms", "x", "--terms2", "x", "--mode", "subcongruence"],
        &["--depth", "1", "--depth2", "1", "--mode", "subcongruence"],
    ];
    for args in cases {
        let mut full = vec!["check", q4];
        full.extend_from_slice(args);
        let out = syncong(&full);
        assert_eq!(code(&out), 1, "{args:?}: {}", stdout(&out));
        let token = recheck_token(&stdout(&out));
        full.extend_from_slice(&["--recheck", &token]);
        let again = syncong(&full);
        assert_eq!(
            code(&again),
            0,
            "{args:?} recheck {token}: {}",
            stdout(&again)
        );
        assert!(stdout(&again).contains("counterexample confirmed: true"));
    }

    let out = syncong(&["check", q4, "--depth", "1", "--recheck", "0@a_1 0@a_2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn principal_check_on_q4_finds_the_cascade_gap() {
    let dir = TempDir::new().unwrap();
    let q4 = qn_file(&dir, 4);
    let out = syncong(&["check", s(&q4), "--depth", "1"]);
    assert!(
        stdout(&out).contains("(a,b) = (0, a_1), pair (0, b_0)"),
        "{}",
        stdout(&out)
    );
    let out = syncong(&["check", s(&q4), "--depth", "4"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: holds"));
}

#[test]
fn syntactic_check_on_small_algebras() {
    let dir = TempDir::new().unwrap();
    let q2 = qn_file(&dir, 2);
    let out = syncong(&["check", s(&q2), "--depth", "1", "--mode", "syntactic"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = syncong(&["check", s(&q2), "--terms", "x", "--mode", "syntactic"]);
    assert_eq!(code(&out), 1);
    // the product symbol may be written as `.`
    let out = syncong(&[
        "check",
        s(&q2),
        "--terms",
        "x; .(meet(x,_),_)",
        "--format",
        "tsv",
    ]);
    assert!(
        stdout(&out).starts_with("mode\tprincipal\nterms\tx; prod(meet(x,_),_)\n"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn resource_limits_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let q4 = qn_file(&dir, 4);
    assert_eq!(
        code(&syncong(&[
            "check",
            s(&q4),
            "--depth",
            "1",
            "--mode",
            "syntactic"
        ])),
        3
    );
    assert_eq!(
        code(&syncong(&[
            "check",
            s(&q4),
            "--depth",
            "3",
            "--budget",
            "100"
        ])),
        3
    );
}

#[test]
fn qomega_subcommands() {
    let out = syncong(&["qomega", "20", "--sentences"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).matches("holds").count(), 4);

    let out = syncong(&["qomega", "2", "--report"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("theta(a_0, b_0): {0, a_0, b_0}"), "{text}");
    assert!(text.contains("monolith: absent"));

    let out = syncong(&["qomega", "--depth-growth", "3", "--format", "tsv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "i\tn\tdepth\tsteps\n1\t3\t2\t1\n2\t4\t3\t1\n3\t5\t4\t1\n"
    );

    let out = syncong(&["qomega", "--depth-growth", "1"]);
    assert!(
        stdout(&out).contains("prod(_,prod(x,_)) [a_0,b_2]"),
        "{}",
        stdout(&out)
    );

    assert_eq!(code(&syncong(&["qomega", "2"])), 2);
    assert_eq!(code(&syncong(&["qomega", "0", "--emit"])), 2);
}

#[test]
fn emitted_algebra_round_trips() {
    let dir = TempDir::new().unwrap();
    let q3 = qn_file(&dir, 3);
    let text = std::fs::read_to_string(&q3).unwrap();
    let again = write(&dir, "again.alg", &text);
    let a = stdout(&syncong(&["info", s(&q3)]));
    let b = stdout(&syncong(&["info", s(&again)]));
    assert_eq!(a, b);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let first = syncong(&["verify", "--suite", "syn"]);
    let second = syncong(&["verify", "--suite", "syn"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).starts_with("syn-oracle: pass"));

    let tsv = syncong(&[
        "verify",
        "--suite",
        "syn",
        "--format",
        "tsv",
        "--threads",
        "1",
    ]);
    assert!(
        stdout(&tsv).starts_with("syn-oracle\t503\t2504\t0\t"),
        "{}",
        stdout(&tsv)
    );
}
