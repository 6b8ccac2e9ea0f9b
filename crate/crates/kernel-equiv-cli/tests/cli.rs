//! Black-box tests of the installed binary: exit codes, report schemas,
//! stream behavior, and byte-level determinism.

use std::io::{BufRead, BufReader};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{Value, json};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kernel-equiv"))
}

fn write_kernel(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const ALL_ONES_2: &str = r#"{"field":"rational","n":2,"entries":[["1","1"],["1","1"]]}"#;
const SIGNED_2: &str = r#"{"field":"rational","n":2,"entries":[["1","-1"],["-1","1"]]}"#;
const ALL_ONES_3: &str =
    r#"{"field":"rational","n":3,"entries":[["1","1","1"],["1","1","1"],["1","1","1"]]}"#;
const OBSTRUCTED_3: &str =
    r#"{"field":"rational","n":3,"entries":[["1","-1","1"],["-1","1","1"],["1","1","1"]]}"#;

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn check_reports_the_witness_on_a_conjugate_pair() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);
    let q = write_kernel(&dir, "q.json", SIGNED_2);
    let out = run(&[
        "check",
        k.to_str().unwrap(),
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout_json(&out),
        json!({
            "equivalent": true,
            "heuristic": false,
            "witness": [1, -1],
            "components": 1,
            "witness_count": 2,
        })
    );
    let again = run(&["check", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.stdout, again.stdout, "reports must be byte-identical across runs");
}

#[test]
fn check_reports_the_obstruction_cycle() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_3);
    let q = write_kernel(&dir, "q.json", OBSTRUCTED_3);
    let out = run(&["check", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_json(&out),
        json!({
            "equivalent": false,
            "heuristic": false,
            "certificate": { "kind": "cycle_obstruction", "cycle": [1, 0, 2, 1] },
        })
    );
}

#[test]
fn find_minor_refines_the_certificate() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_3);
    let q = write_kernel(&dir, "q.json", OBSTRUCTED_3);
    let out = run(&[
        "check",
        "--find-minor",
        k.to_str().unwrap(),
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_json(&out)["certificate"],
        json!({
            "kind": "minor_mismatch",
            "subset": [0, 1, 2],
            "det_k": "0",
            "det_q": "-4",
        })
    );
}

#[test]
fn dump_flags_add_graph_and_transition() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);
    let q = write_kernel(&dir, "q.json", SIGNED_2);
    let out = run(&[
        "check",
        "--dump-graph",
        "--dump-transition",
        k.to_str().unwrap(),
        q.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(
        report["graph"],
        json!({
            "components": [{ "base": 0, "vertices": [0, 1] }],
            "forest_edges": [[0, 1]],
            "fundamental_cycles": [],
        })
    );
    assert_eq!(report["transition"], json!({ "edges": [[0, 1, -1]] }));
}

#[test]
fn all_flag_lists_every_pointwise_failure() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);
    let q = write_kernel(
        &dir,
        "q.json",
        r#"{"field":"rational","n":2,"entries":[["-1","2"],["2","-1"]]}"#,
    );
    let out = run(&["check", "--all", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["certificate"]["kind"], "diagonal_mismatch");
    assert_eq!(
        report["failures"],
        json!([
            { "kind": "diagonal_mismatch", "index": 0 },
            { "kind": "square_mismatch", "i": 0, "j": 1 },
            { "kind": "diagonal_mismatch", "index": 1 },
        ])
    );
}

#[test]
fn witness_prints_only_the_vector() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);
    let q = write_kernel(&dir, "q.json", SIGNED_2);
    let out = run(&["witness", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"[1,-1]\n");

    let p = write_kernel(&dir, "p.json", OBSTRUCTED_3);
    let k3 = write_kernel(&dir, "k3.json", ALL_ONES_3);
    let refused = run(&["witness", k3.to_str().unwrap(), p.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(refused.stdout.is_empty());
}

#[test]
fn enumerate_streams_one_witness_per_line() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);
    let q = write_kernel(&dir, "q.json", SIGNED_2);
    let out = run(&["enumerate", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(out.stdout, b"[1,-1]\n[-1,1]\n");

    let diag = r#"{"field":"rational","n":2,"entries":[["2","0"],["0","3"]]}"#;
    let d = write_kernel(&dir, "d.json", diag);
    let four = run(&["enumerate", d.to_str().unwrap(), d.to_str().unwrap()]);
    assert_eq!(four.status.code(), Some(0));
    assert_eq!(four.stdout, b"[1,1]\n[-1,1]\n[1,-1]\n[-1,-1]\n");
}

#[test]
fn enumerate_stops_quietly_when_the_reader_hangs_up() {
    // A 12-point diagonal kernel has 4096 witnesses, far more output than a
    // pipe buffers; reading one line and closing must still end in exit 0.
    let n = 12;
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { "1".to_string() } else { "0".to_string() })
                .collect()
        })
        .collect();
    let body = serde_json::to_string(&json!({
        "field": "rational",
        "n": n,
        "entries": rows,
    }))
    .unwrap();
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", &body);
    let mut child = bin()
        .args(["enumerate", k.to_str().unwrap(), k.to_str().unwrap()])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let stdout = child.stdout.take().unwrap();
    let mut first = String::new();
    BufReader::new(stdout).read_line(&mut first).unwrap();
    assert_eq!(first.trim(), "[1,1,1,1,1,1,1,1,1,1,1,1]");
    // Dropping the reader closes the pipe while the child is still writing.
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn oracle_reports_the_first_differing_minor() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_3);
    let q = write_kernel(&dir, "q.json", OBSTRUCTED_3);
    let out = run(&[
        "oracle",
        k.to_str().unwrap(),
        q.to_str().unwrap(),
        "--max-size",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_json(&out),
        json!({
            "max_size": 3,
            "subsets_checked": 7,
            "result": {
                "kind": "first_mismatch",
                "subset": [0, 1, 2],
                "det_k": "0",
                "det_q": "-4",
            },
        })
    );

    let same = run(&["oracle", k.to_str().unwrap(), k.to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(
        stdout_json(&same),
        json!({ "max_size": 3, "subsets_checked": 7, "result": "all_equal" })
    );
}

#[test]
fn oracle_worker_count_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_3);
    let sequential = run(&["oracle", k.to_str().unwrap(), k.to_str().unwrap()]);
    let parallel = bin()
        .args(["oracle", k.to_str().unwrap(), k.to_str().unwrap()])
        .env("KERNEL_EQUIV_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(parallel.status.code(), Some(0));
    assert_eq!(sequential.stdout, parallel.stdout);

    let bad = bin()
        .args(["oracle", k.to_str().unwrap(), k.to_str().unwrap()])
        .env("KERNEL_EQUIV_WORKERS", "banana")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let args = [
        "gen", "--field", "gfp", "--p", "7", "--n", "6", "--density", "0.4", "--seed", "9",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let kernel = stdout_json(&first);
    assert_eq!(kernel["field"], "gfp");
    assert_eq!(kernel["p"], 7);
    assert_eq!(kernel["n"], 6);
}

#[test]
fn generated_kernels_round_trip_through_check() {
    let dir = TempDir::new().unwrap();
    let out = run(&["gen", "--field", "rational", "--n", "5", "--seed", "3"]);
    let k = write_kernel(&dir, "k.json", std::str::from_utf8(&out.stdout).unwrap());
    let same = run(&["check", k.to_str().unwrap(), k.to_str().unwrap()]);
    assert_eq!(same.status.code(), Some(0));
    let report = stdout_json(&same);
    assert_eq!(report["equivalent"], json!(true));
    assert_eq!(report["witness"], json!([1, 1, 1, 1, 1]));
}

#[test]
fn approx_kernels_flag_the_verdict_as_heuristic() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(
        &dir,
        "k.json",
        r#"{"field":"approx","n":2,"entries":[[1.0,0.5],[0.5,1.0]]}"#,
    );
    let q = write_kernel(
        &dir,
        "q.json",
        r#"{"field":"approx","n":2,"entries":[[1.0,-0.5],[-0.5,1.0]]}"#,
    );
    let out = run(&["check", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["equivalent"], json!(true));
    assert_eq!(report["heuristic"], json!(true));
    assert_eq!(report["witness"], json!([1, -1]));
}

#[test]
fn usage_and_input_errors_exit_two_with_json_diagnostics() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);

    let missing = run(&["check", "/no/such/file.json", k.to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(missing.stdout.is_empty());
    let diag: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert!(diag["error"].is_string());

    let malformed = write_kernel(&dir, "bad.json", "{ not json");
    let parse = run(&["check", malformed.to_str().unwrap(), k.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(2));
    let diag: Value = serde_json::from_slice(&parse.stderr).unwrap();
    assert!(diag["error"].is_string());

    let asym = write_kernel(
        &dir,
        "asym.json",
        r#"{"field":"rational","n":2,"entries":[["1","1"],["2","1"]]}"#,
    );
    let refused = run(&["check", asym.to_str().unwrap(), k.to_str().unwrap()]);
    assert_eq!(refused.status.code(), Some(2));

    let gfp = write_kernel(
        &dir,
        "gfp.json",
        r#"{"field":"gfp","p":7,"n":2,"entries":[[1,1],[1,1]]}"#,
    );
    let mixed = run(&["check", k.to_str().unwrap(), gfp.to_str().unwrap()]);
    assert_eq!(mixed.status.code(), Some(2));

    let unknown = run(&["check", "--bogus", k.to_str().unwrap(), k.to_str().unwrap()]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn verbose_goes_to_stderr_and_leaves_the_payload_alone() {
    let dir = TempDir::new().unwrap();
    let k = write_kernel(&dir, "k.json", ALL_ONES_2);
    let q = write_kernel(&dir, "q.json", SIGNED_2);
    let quiet = run(&["check", k.to_str().unwrap(), q.to_str().unwrap()]);
    let loud = run(&["check", "--verbose", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(quiet.stdout, loud.stdout);
    assert!(quiet.stderr.is_empty());
    assert!(!loud.stderr.is_empty());

    // --json is accepted everywhere; output is JSON either way.
    let flagged = run(&["check", "--json", k.to_str().unwrap(), q.to_str().unwrap()]);
    assert_eq!(flagged.stdout, quiet.stdout);
}
