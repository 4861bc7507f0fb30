use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_morphpat");

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn iterate_prints_digits() {
    let phi = data("phi_w.morph");
    let out = run(&["iterate", "--morphism", &phi, "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "123132123213\n");

    let out = run(&["iterate", "--morphism", &phi, "--n", "1"]);
    assert_eq!(stdout(&out), "123\n");
}

#[test]
fn iterate_refuses_past_the_cap() {
    let out = run(&["iterate", "--morphism", &data("phi_w.morph"), "--n", "40", "--cap", "10000000"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout(&out), "");
    assert!(stderr(&out).contains("1649267441664"), "{}", stderr(&out));
}

#[test]
fn iterate_uses_spaces_for_wide_alphabets() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("wide.morph");
    let mut text = String::from("k: 10\n1 -> 1 10\n");
    for i in 2..=10 {
        text.push_str(&format!("{i} -> {i}\n"));
    }
    std::fs::write(&file, text).unwrap();
    let out = run(&["iterate", "--morphism", file.to_str().unwrap(), "--n", "2"]);
    assert_eq!(stdout(&out), "1 10 10\n");
}

#[test]
fn count_both_agree() {
    let out = run(&["count", "--morphism", &data("phi_w.morph"), "--pattern", "1-2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "pattern 1-2, n = 2, length 6\noracle: 8 [dashed-pair-scan]\nclosed: 8 [dashed-pair]\nAGREE\n"
    );
}

#[test]
fn count_closed_inapplicable_exits_4() {
    let out = run(&[
        "count", "--morphism", &data("phi_w.morph"), "--pattern", "21", "--n", "2", "--method", "closed",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let text = stdout(&out);
    assert!(text.starts_with("closed: inapplicable\n"), "{text}");
    assert!(text.contains("X_1 X_2 = 12313 has 31"), "{text}");
}

#[test]
fn count_erasing_example() {
    let out = run(&[
        "count", "--morphism", &data("erasing4.morph"), "--pattern", "1-2", "--n", "2", "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n\tlength\toracle\tclosed\tstatus\n2\t8\t15\t15\tAGREE\n");
}

#[test]
fn count_with_named_strategies() {
    let phi = data("phi_w.morph");
    let out = run(&[
        "count", "--morphism", &phi, "--pattern", "1-2", "--n", "4", "--counter", "exhaustive",
        "--formula", "dashed-pair",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("oracle: 104 [exhaustive]"));

    let out = run(&["count", "--morphism", &phi, "--pattern", "1-2", "--n", "2", "--counter", "dashless-scan"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["count", "--morphism", &phi, "--pattern", "1-2", "--n", "2", "--formula", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown strategy"));
}

#[test]
fn count_closed_only_beyond_the_cap() {
    let out = run(&[
        "count", "--morphism", "builtin:phi-w", "--pattern", "1-2", "--n", "30", "--cap", "1000",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("oracle: - ("), "{text}");
    assert!(text.ends_with("CLOSED-ONLY\n"), "{text}");

    let out = run(&[
        "count", "--morphism", "builtin:phi-w", "--pattern", "1-2", "--n", "30", "--cap", "1000", "--method",
        "oracle",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_rows() {
    let phi = data("phi_w.morph");
    let out = run(&["table", "--morphism", &phi, "--pattern", "1-2", "--from", "1", "--to", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "n\tlength\toracle\tclosed\tstatus\n\
         1\t3\t3\t3\tAGREE\n\
         2\t6\t8\t8\tAGREE\n\
         3\t12\t28\t28\tAGREE\n\
         4\t24\t104\t104\tAGREE\n"
    );

    let out = run(&["table", "--morphism", &phi, "--pattern", "1-1-1-1", "--from", "1", "--to", "4"]);
    let oracle: Vec<String> = stdout(&out).lines().skip(1).map(|l| l.split('\t').nth(2).unwrap().to_string()).collect();
    assert_eq!(oracle, ["0", "0", "3", "210"]);

    let out = run(&["table", "--morphism", &phi, "--pattern", "12", "--from", "2", "--to", "5"]);
    let closed: Vec<String> = stdout(&out).lines().skip(1).map(|l| l.split('\t').nth(3).unwrap().to_string()).collect();
    assert_eq!(closed, ["3", "6", "12", "24"]);
}

#[test]
fn table_marks_rows_past_the_cap() {
    let out = run(&[
        "table", "--morphism", "builtin:phi-w", "--pattern", "12", "--from", "5", "--to", "6", "--cap", "60",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "n\tlength\toracle\tclosed\tstatus\n5\t48\t24\t24\tAGREE\n6\t96\t-\t48\tCLOSED-ONLY\n"
    );
}

#[test]
fn table_closed_inapplicable_emits_nothing() {
    let out = run(&[
        "table", "--morphism", "builtin:phi-w", "--pattern", "21", "--from", "2", "--to", "3", "--method", "closed",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stdout(&out), "");
    assert!(stderr(&out).contains("external-occurrence-found"));
}

#[test]
fn table_range_is_validated() {
    let out = run(&["table", "--morphism", "builtin:phi-w", "--pattern", "12", "--from", "3", "--to", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["table", "--morphism", "builtin:phi-w", "--pattern", "12", "--from", "0", "--to", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["table", "--morphism", "builtin:phi-w", "--pattern", "12", "--n", "2", "--cap", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stats_and_check_external() {
    let out = run(&["stats", "--morphism", &data("phi_w.morph"), "--pattern", "1-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "k: 3\nl: 1\nd: 1\nuniform: yes\ns: 3 1 0\ne: 3 1 0\ne_ij:\n  - 2 1\n  2 - 1\n  1 1 -\nsymmetric: yes\n"
    );

    let out = run(&["stats", "--morphism", &data("nonuniform.morph"), "--pattern", "1-2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("uniform: no"));

    let out = run(&["check-external", "--morphism", &data("dashless4.morph"), "--pattern", "213"]);
    assert_eq!((out.status.code(), stdout(&out)), (Some(0), "applicable\n".to_string()));

    let out = run(&["check-external", "--morphism", &data("dashless4.morph"), "--pattern", "321"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("X_4 X_2 X_1 = 12431243 has 431"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.morph");
    std::fs::write(&bad, "k: 3\n1 -> 123\n2 -> 13\n3 => 2\n").unwrap();
    let out = run(&["iterate", "--morphism", bad.to_str().unwrap(), "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let out = run(&["count", "--morphism", "builtin:phi-w", "--pattern", "1--2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["iterate", "--morphism", "/nonexistent/file", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_paper_passes() {
    let out = run(&["verify-paper"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("formula=oracle=15; printed=23"));
    assert!(text.ends_with("10 passed, 0 failed\n"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--morphism", "builtin:growth9", "--pattern", "2-1", "--from", "1", "--to", "4"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
