//! End-to-end tests driving the binary: exit codes, emitted files, and the
//! byte-level formats.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_obdd2res"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

#[test]
fn gen_fixture_golden_bytes() {
    let out = run(&["gen", "fixture", "running-example"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");
}

#[test]
fn gen_php_counts() {
    let out = run(&["gen", "php", "-n", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("p cnf 6 9\n"));
    assert_eq!(text.lines().count(), 10);

    let doubled = run(&["gen", "php-doubled", "-n", "2"]);
    assert!(stdout(&doubled).starts_with("p cnf 7 18\n"));
}

#[test]
fn gen_unknown_fixture_is_usage_error() {
    assert_eq!(code(&run(&["gen", "fixture", "nope"])), 2);
}

#[test]
fn gen_random_unsat_over_the_oracle_limit_is_a_budget_error() {
    let out = run(&["gen", "random-unsat", "--vars", "25", "--clauses", "10"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn refute_emits_a_trace_that_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let trace = dir.path().join("f.trace");
    write(&cnf, "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");

    let out = run(&[
        "refute",
        cnf.to_str().unwrap(),
        "--emit-proof",
        trace.to_str().unwrap(),
        "--check",
        "--oracle-verify",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("s UNSATISFIABLE"));
    assert!(text.contains("c check: OK"));
    assert!(text.contains("c m=4 n=18"));

    let trace_text = fs::read_to_string(&trace).unwrap();
    assert!(trace_text.ends_with("7 0 4 6 0\n"));
    assert_eq!(trace_text.lines().count(), 7);

    let check = run(&["check", cnf.to_str().unwrap(), trace.to_str().unwrap()]);
    assert_eq!(code(&check), 0);
    assert_eq!(stdout(&check), "OK\n");
}

#[test]
fn check_rejects_a_mutated_trace_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let trace = dir.path().join("f.trace");
    write(&cnf, "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");
    // step 6 claims -2 instead of 1
    write(
        &trace,
        "1 1 -2 0 0\n2 2 3 0 0\n3 2 -3 0 0\n4 -1 0 0\n5 2 0 2 3 0\n6 -2 0 1 5 0\n7 0 4 6 0\n",
    );
    let out = run(&["check", cnf.to_str().unwrap(), trace.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL at step 6"));
}

#[test]
fn check_reports_parse_errors_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let trace = dir.path().join("f.trace");
    write(&cnf, "p cnf 1 2\n1 0\n-1 0\n");
    write(&trace, "1 1 0 0\n2 0 1 99 0\n");
    assert_eq!(
        code(&run(&[
            "check",
            cnf.to_str().unwrap(),
            trace.to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn refute_satisfiable_is_success_with_a_flag_line() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("sat.cnf");
    write(&cnf, "p cnf 2 1\n1 2 0\n");
    let out = run(&["refute", cnf.to_str().unwrap(), "--oracle-verify"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("s SATISFIABLE"));
}

#[test]
fn refute_missing_file_is_usage_error() {
    assert_eq!(code(&run(&["refute", "/nonexistent/x.cnf"])), 2);
}

#[test]
fn refute_with_tiny_path_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    write(&cnf, "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");
    let out = run(&["refute", cnf.to_str().unwrap(), "--path-budget", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn refute_emits_script_stats_and_dots() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let script = dir.path().join("script.json");
    let stats = dir.path().join("stats.json");
    let dots = dir.path().join("dots");
    write(&cnf, "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");
    let out = run(&[
        "refute",
        cnf.to_str().unwrap(),
        "--emit-script",
        script.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
        "--dot",
        dots.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let script_json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&script).unwrap()).unwrap();
    assert_eq!(script_json["m"], 4);
    assert_eq!(script_json["outcome"], "Refuted");

    let stats_json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(stats_json["refutation_size"], 18);
    assert_eq!(stats_json["derived_steps"], 3);

    let dot_files: Vec<_> = fs::read_dir(&dots).unwrap().collect();
    // 4 axioms + 3 joins + 3 eliminations
    assert_eq!(dot_files.len(), 10);
    let axiom_dot = fs::read_to_string(dots.join("s001_axiom_C1.dot")).unwrap();
    assert!(axiom_dot.starts_with("digraph obdd {"));
}

#[test]
fn refute_with_custom_order_and_balanced_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    write(&cnf, "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");
    let out = run(&[
        "refute",
        cnf.to_str().unwrap(),
        "--order",
        "3,2,1",
        "--schedule",
        "balanced",
        "--check",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("s UNSATISFIABLE"));

    let bad = run(&["refute", cnf.to_str().unwrap(), "--order", "1,2"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn refute_with_explicit_schedule_file() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let tree = dir.path().join("tree.json");
    write(&cnf, "p cnf 3 4\n1 -2 0\n2 3 0\n2 -3 0\n-1 0\n");
    write(&tree, "[[4,1],[2,3]]");
    let out = run(&[
        "refute",
        cnf.to_str().unwrap(),
        "--schedule",
        tree.to_str().unwrap(),
        "--check",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    write(&tree, "[[1,1],[2,3]]");
    let bad = run(&[
        "refute",
        cnf.to_str().unwrap(),
        "--schedule",
        tree.to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn bench_php_rows_respect_the_bounds() {
    let out = run(&["bench", "php", "1..3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,m,n,derived,m_times_n,n_squared"
    );
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 6);
        let m: usize = cells[1].parse().unwrap();
        let n: usize = cells[2].parse().unwrap();
        let derived: usize = cells[3].parse().unwrap();
        let product: usize = cells[4].parse().unwrap();
        let square: usize = cells[5].parse().unwrap();
        assert_eq!(product, m * n);
        assert_eq!(square, n * n);
        assert!(derived <= product);
        if m <= n {
            assert!(derived <= square);
        }
        rows += 1;
    }
    assert_eq!(rows, 3);
}

#[test]
fn bench_sequential_flag_matches_parallel_output() {
    let par = run(&["bench", "php", "1..2"]);
    let seq = run(&["bench", "php", "1..2", "--sequential"]);
    assert_eq!(stdout(&par), stdout(&seq));
}

#[test]
fn bench_unknown_family_is_usage_error() {
    assert_eq!(code(&run(&["bench", "mystery", "1..2"])), 2);
    assert_eq!(code(&run(&["bench", "php", "3..1"])), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&[])), 2);
}
