use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn rscn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rscn")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(rscn(&["verify", "hecke", "--n", "1"]).status.code(), Some(0));
    assert_eq!(rscn(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(rscn(&["verify", "hecke", "--n", "0"]).status.code(), Some(2));
    assert_eq!(rscn(&["verify", "hecke", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(rscn(&["verify", "top", "--mode", "modular"]).status.code(), Some(2));
    assert_eq!(rscn(&["verify", "hecke", "--plant-bug"]).status.code(), Some(2));
    assert_eq!(rscn(&["print", "T5", "--n", "2"]).status.code(), Some(2));
    assert_eq!(rscn(&["extract", "--bless"]).status.code(), Some(2));
}

#[test]
fn modular_hecke_rank_three() {
    let o = rscn(&["verify", "hecke", "--n", "3", "--mode", "modular", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_record_fields() {
    let o = rscn(&["verify", "prop1", "--n", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for k in ["target", "n", "l", "deg", "mode", "seed", "passed", "witnesses", "wall_time_ms"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["target"], "prop1");
    assert_eq!(v["passed"], true);
    assert!(v["wall_time_ms"].is_null());
    let timed = rscn(&["verify", "prop1", "--n", "1", "--format", "json", "--timing"]);
    let v: Value = serde_json::from_str(&stdout(&timed)).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn verify_all_is_sorted_by_target() {
    let o = rscn(&["verify", "all", "--n", "1", "--mode", "modular", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<String> = v.as_array().unwrap().iter().map(|r| r["target"].as_str().unwrap().to_string()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(names.len(), 10);
}

#[test]
fn report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.txt");
    let o = rscn(&["verify", "ty", "--n", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(&path).unwrap(), stdout(&o));
}

#[test]
fn print_examples() {
    let d = stdout(&rscn(&["print", "D", "--n", "1", "--l", "1", "--format", "human"]));
    assert_eq!(d.lines().count(), 2, "{d}");
    let delta = stdout(&rscn(&["print", "Delta", "--n", "2", "--l", "1,1", "--format", "human"]));
    assert_eq!(delta.trim().matches(")*(").count() + 1, 4, "{delta}");
    let m = stdout(&rscn(&["print", "M", "--n", "1"]));
    assert!(m.starts_with("# rscn-operator v1\n"));
    assert!(m.contains("terms 2\n"));
}

#[test]
fn print_restricted_and_printed_flags() {
    assert_eq!(rscn(&["print", "A", "--n", "1", "--restricted"]).status.code(), Some(0));
    assert_eq!(rscn(&["print", "Hshift", "--n", "1", "--printed"]).status.code(), Some(0));
    assert_eq!(rscn(&["print", "M", "--restricted"]).status.code(), Some(2));
    assert_eq!(rscn(&["print", "D", "--printed"]).status.code(), Some(2));
}

#[test]
fn cache_serves_identical_operators() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().to_str().unwrap();
    let fresh = stdout(&rscn(&["print", "B", "--n", "1", "--restricted"]));
    let first = stdout(&rscn(&["print", "B", "--n", "1", "--restricted", "--cache-dir", c]));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = stdout(&rscn(&["print", "B", "--n", "1", "--restricted", "--cache-dir", c]));
    assert_eq!(fresh, first);
    assert_eq!(fresh, second);
}

#[test]
fn corrupt_cache_entries_are_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().to_str().unwrap();
    let fresh = stdout(&rscn(&["print", "A", "--n", "1", "--cache-dir", c]));
    for e in fs::read_dir(dir.path()).unwrap() {
        fs::write(e.unwrap().path(), "garbage").unwrap();
    }
    assert_eq!(stdout(&rscn(&["print", "A", "--n", "1", "--cache-dir", c])), fresh);
}

#[test]
fn extract_rank_one_and_golden_round_trip() {
    let o = rscn(&["extract", "--n", "1", "--l", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["leading"].as_array().unwrap().len(), 2);
    assert!(v["lower"].as_array().unwrap().is_empty());

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().to_str().unwrap();
    assert_eq!(rscn(&["extract", "--n", "1", "--golden-dir", g]).status.code(), Some(1));
    assert_eq!(rscn(&["extract", "--n", "1", "--golden-dir", g, "--bless"]).status.code(), Some(0));
    assert_eq!(rscn(&["extract", "--n", "1", "--golden-dir", g]).status.code(), Some(0));
    let op = dir.path().join("D_n1_l1-1.op");
    let text = fs::read_to_string(&op).unwrap().replace("q^2", "q^4");
    fs::write(&op, text).unwrap();
    let o = rscn(&["extract", "--n", "1", "--golden-dir", g]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("golden: mismatch"));
}
