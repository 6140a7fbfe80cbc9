use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use qschur::canonical::CanonicalExpansion;
use qschur::suites::SuiteReport;
use qschur::{FlagSymbol, PeriodicMatrix};

fn qschur(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qschur"));
    cmd.args(args).env_remove("QSCHUR_CACHE");
    if let Some(dir) = cache {
        cmd.env("QSCHUR_CACHE", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect()
}

#[test]
fn xstat_example() {
    let o = qschur(&["compute", "xstat", "--p", "n=2;D=2;[2,1]"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn canonical_t_round_trips() {
    let o = qschur(&["compute", "canonical-t", "--p", "n=2;D=2;[2,1]"], None);
    assert!(o.status.success());
    let b: CanonicalExpansion<FlagSymbol> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(b.leading.to_string(), "n=2;D=2;[2,1]");
    assert_eq!(b.terms.len(), 2);
}

#[test]
fn crystal_graph_dot() {
    let o = qschur(&["compute", "crystal-graph", "--n", "2", "--D", "1", "--window", "4", "--format", "dot"], None);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("digraph crystal {"));
}

#[test]
fn parse_error_reports_position() {
    let o = qschur(&["compute", "xstat", "--p", "n=2;D=2;[2,x]"], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("entry 1"), "{err}");
}

#[test]
fn relations_suite_passes() {
    let o = qschur(&["suite", "relations", "--n", "2", "--D", "2"], None);
    assert!(o.status.success());
    let r: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.suite, "relations");
    assert_eq!(r.conventions["commutator"], "next-index");
    assert!(r.cases.iter().any(|c| c.id.contains("Serre")));
}

#[test]
fn wrong_convention_fails_with_nonzero_exit() {
    let o = qschur(&["suite", "relations", "--n", "3", "--D", "2", "--commutator", "previous-index"], None);
    assert_eq!(o.status.code(), Some(1));
    let r: SuiteReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.passed());
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["compute", "canonical-s", "--s", "n=2;D=2;[[1,2,1],[2,1,1]]"];
    let cold = qschur(&args, Some(dir.path()));
    let files = snapshot(dir.path());
    let warm = qschur(&args, Some(dir.path()));
    assert!(cold.status.success() && warm.status.success());
    assert_eq!(cold.stdout, warm.stdout);
    assert!(!files.is_empty());
    assert_eq!(files, snapshot(dir.path()));
    let b: CanonicalExpansion<PeriodicMatrix> = serde_json::from_str(&stdout(&warm)).unwrap();
    assert_eq!(b.leading.to_string(), "n=2;D=2;[[1,2,1],[2,1,1]]");
}

#[test]
fn transfer_verdict() {
    let o = qschur(&["compute", "transfer", "--s", "n=2;D=4;[[1,1,2],[1,2,1],[2,2,1]]"], None);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["verdict"], "matches-b");
    assert!(v[0].get("route-A").is_some());
}
