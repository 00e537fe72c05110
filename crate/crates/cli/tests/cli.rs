//! End-to-end tests driving the compiled binary with real files, checking
//! exit codes, report contents, and seeded reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use xtrail::hypergraph::DGraph;
use xtrail::trails::path_graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xtrail"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn report(out: &Output) -> Value {
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is a json document");
    doc["report"].clone()
}

fn write_file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).expect("fixture writes");
    path
}

fn host_file(dir: &TempDir, name: &str, g: &DGraph) -> PathBuf {
    write_file(dir, name, &g.to_json())
}

fn arg(path: &Path) -> &str {
    path.to_str().expect("utf8 temp path")
}

#[test]
fn verify_accepts_the_pentagon_tour() {
    let dir = TempDir::new().unwrap();
    let seq = write_file(&dir, "k5.seq", "2 5 closed\n1 2 3 4 5\n");
    let host = host_file(&dir, "k5.json", &DGraph::complete(5, 2).unwrap());

    let out = run(&["verify", arg(&seq), arg(&host)]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["valid"], Value::Bool(true));
    assert_eq!(r["covered"].as_array().unwrap().len(), 10);
    assert!(r["duplicates"].as_array().unwrap().is_empty());
}

#[test]
fn verify_rejects_a_duplicate_coverage() {
    let dir = TempDir::new().unwrap();
    let seq = write_file(&dir, "bad.seq", "2 4 open\n1 2 3 1\n");
    let host = host_file(&dir, "k5.json", &DGraph::complete(5, 2).unwrap());

    let out = run(&["verify", arg(&seq), arg(&host)]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["valid"], Value::Bool(false));
    assert!(!r["duplicates"].as_array().unwrap().is_empty());
}

#[test]
fn verify_rejects_unreadable_input() {
    let dir = TempDir::new().unwrap();
    let seq = write_file(&dir, "k5.seq", "2 5 closed\n1 2 3 4 5\n");
    let broken = write_file(&dir, "broken.json", "{not json");
    let out = run(&["verify", arg(&seq), arg(&broken)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse"));

    let garbage = write_file(&dir, "garbage.seq", "three vertices please\n");
    let host = host_file(&dir, "host.json", &DGraph::complete(5, 2).unwrap());
    let out = run(&["verify", arg(&garbage), arg(&host)]);
    assert_eq!(code(&out), 2);

    let missing = dir.path().join("absent.seq");
    let out = run(&["verify", arg(&missing), arg(&host)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn tour_search_finds_and_refutes() {
    let out = run(&["search", "tour", "--n", "5", "--d", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["found"]["entries"].as_array().unwrap().len(), 5);
    assert_eq!(r["exhausted"], Value::Bool(true));

    let out = run(&["search", "tour", "--n", "6", "--d", "2"]);
    assert_eq!(code(&out), 1, "K_6 fails the tour residues");
    let r = report(&out);
    assert_eq!(r["found"], Value::Null);
    assert_eq!(r["exhausted"], Value::Bool(true));
    assert!(!r["obstructions"].as_array().unwrap().is_empty());
}

#[test]
fn trail_search_follows_prescribed_ends() {
    let dir = TempDir::new().unwrap();
    let host = host_file(&dir, "p6.json", &path_graph(6, 2).unwrap());

    let out = run(&[
        "search", "trail", "--host", arg(&host), "--start", "1,2", "--finish", "6,5",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    let entries: Vec<u64> = r["found"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(entries, vec![1, 2, 3, 4, 5, 6]);

    let out = run(&[
        "search", "trail", "--n", "7", "--start", "1,2", "--finish", "7,6",
    ]);
    assert_eq!(code(&out), 1, "K_7 trail ends fail the residues");
    assert_eq!(report(&out)["exhausted"], Value::Bool(true));
}

#[test]
fn johnson_search_reports_the_snake_length() {
    let out = run(&["search", "johnson", "--n", "6", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["length"], Value::from(5));
    assert_eq!(r["path"].as_array().unwrap().len(), 6);
    assert_eq!(r["exhausted"], Value::Bool(true));
}

#[test]
fn construct_certifies_both_routes() {
    let out = run(&["construct", "--n", "5"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["method"], Value::from("tour-minus-facet"));
    assert_eq!(r["certificate"]["diameter"], Value::from(3));
    assert_eq!(r["certificate"]["extremal"], Value::Bool(true));

    let out = run(&["construct", "--n", "9"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["method"], Value::from("johnson-snake"));
    assert_eq!(r["certificate"]["diameter"], Value::from(16));
    assert_eq!(r["certificate"]["extremal"], Value::Bool(true));
    assert_eq!(r["family"]["facets"].as_array().unwrap().len(), 17);
}

#[test]
fn seeded_sampling_is_reproducible() {
    let args = [
        "sample", "decomp", "--n", "12", "--t", "4", "--seed", "5",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout, "same seed, same bytes");
    let r = report(&first);
    assert!(r["covered_edges"].as_u64().unwrap() > 0);

    let args = [
        "sample", "walk", "--n", "6", "--steps", "2000", "--seed", "9",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(report(&first)["states"], Value::from(30));

    let args = [
        "sample", "paths", "--n", "10", "--t", "5", "--count", "3", "--seed", "4",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(report(&first)["paths"].as_array().unwrap().len(), 3);
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.json");
    let out = run(&["search", "tour", "--n", "5", "--out", arg(&target)]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty(), "the report went to the file");
    let doc: Value =
        serde_json::from_str(&fs::read_to_string(&target).unwrap()).expect("file is json");
    assert_eq!(doc["command"], Value::from("search tour"));
    assert_eq!(doc["config"]["seed"], Value::from(0));
}

#[test]
fn text_format_is_a_single_line() {
    let dir = TempDir::new().unwrap();
    let seq = write_file(&dir, "k5.seq", "2 5 closed\n1 2 3 4 5\n");
    let host = host_file(&dir, "k5.json", &DGraph::complete(5, 2).unwrap());
    let out = run(&["verify", arg(&seq), arg(&host), "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "valid extra-tight tour: covers 10 edges of the host\n"
    );
}

#[test]
fn bad_flags_are_input_errors() {
    let out = run(&["search", "tour", "--n", "5", "--threads", "0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--threads"));

    let out = run(&["search", "tour"]);
    assert_eq!(code(&out), 2, "a host is required");

    let dir = TempDir::new().unwrap();
    let host = host_file(&dir, "k5.json", &DGraph::complete(5, 2).unwrap());
    let out = run(&["search", "tour", "--host", arg(&host), "--n", "5"]);
    assert_eq!(code(&out), 2, "--host conflicts with --n");

    let out = run(&["construct", "--n", "5", "--d", "3"]);
    assert_eq!(code(&out), 2, "only 2-complexes are constructed");
}
