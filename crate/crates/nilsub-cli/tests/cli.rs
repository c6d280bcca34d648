use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const P_OBJECT: &str = "field = 2\nm = 2\nn = 3\ncolumns = [2]\ngenerators = [[[1, 0, 1]]]\n";
const Y_OBJECT: &str = "field = 2\nm = 2\nn = 3\ncolumns = [3]\ngenerators = []\n";
const MIXED_OBJECT: &str = "field = 2\nm = 1\nn = 3\ncolumns = [3, 1]\ngenerators = [[[1, 2, 1], [2, 0, 1]]]\n";

fn nilsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsub")).args(args).env_remove("NILSUB_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hom_of_projective_with_itself_has_dimension_m() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.toml", P_OBJECT);
    let out = nilsub(&["hom", arg(&p), arg(&p), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["dim"], 2);
}

#[test]
fn tau_of_y_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let y = write(dir.path(), "y.toml", Y_OBJECT);
    let out = nilsub(&["tau", arg(&y)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("relatively projective"), "{}", stderr(&out));
}

#[test]
fn malformed_object_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "field = 4\nm = 1\nn = 2\ncolumns = [1]\ngenerators = []\n");
    let out = nilsub(&["hom", arg(&bad), arg(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let missing = nilsub(&["hom", "no/such/file.toml", "no/such/file.toml"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn unknown_case_is_an_input_error() {
    assert_eq!(nilsub(&["verify", "no-such-case"]).status.code(), Some(2));
}

#[test]
fn verify_small_counts_passes() {
    let out = nilsub(&["verify", "s1-counts", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 6, "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let out = nilsub(&["enumerate", "--m", "3", "--n", "4", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stdout(&out).contains("\"complete\":false"));
}

#[test]
fn enumerated_catalog_round_trips_through_arquiver() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("s2n3.jsonl");
    let out = nilsub(&["enumerate", "--m", "2", "--n", "3", "-o", arg(&cat)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let q = nilsub(&["arquiver", "--catalog", arg(&cat), "--format", "json"]);
    assert_eq!(q.status.code(), Some(0), "{}", stderr(&q));
    let v: serde_json::Value = serde_json::from_str(stdout(&q).trim()).unwrap();
    assert_eq!(v["nodes"], 9);
    assert_eq!(v["mesh_failures"], 0);
}

#[test]
fn arquiver_dot_for_s1_has_six_nodes() {
    let out = nilsub(&["arquiver", "--m", "1", "--n", "3", "--dot"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let dot = stdout(&out);
    assert!(dot.trim_start().starts_with("digraph"));
    let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    assert_eq!(nodes, 6, "{dot}");
}

#[test]
fn decompose_writes_one_file_per_summand() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "x.toml", MIXED_OBJECT);
    let out_dir = dir.path().join("pieces");
    let out = nilsub(&["decompose", arg(&x), "--out-dir", arg(&out_dir), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let pieces = v["pieces"].as_u64().unwrap() as usize;
    assert_eq!(std::fs::read_dir(&out_dir).unwrap().count(), pieces);
    assert_eq!(v["complete"], true);
}

#[test]
fn orbit_of_projective_ends_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.toml", P_OBJECT);
    let out = nilsub(&["orbit", arg(&p), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["length"], 1);
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_nilsub")).args(["verify", "list"]).env("NILSUB_SEED", "17").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("\"seed\":17"), "{}", stderr(&out));
}

#[test]
fn ar_sequence_of_a_simple_object_is_verified() {
    let dir = tempfile::tempdir().unwrap();
    let x = write(dir.path(), "s.toml", "field = 3\nm = 1\nn = 3\ncolumns = [1]\ngenerators = []\n");
    let out = nilsub(&["ar-sequence", arg(&x), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["exact"], true);
    assert_eq!(v["non_split"], true);
    assert!(!v["middle_summands"].as_array().unwrap().is_empty());
}
