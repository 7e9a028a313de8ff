use std::path::Path;
use std::process::{Command, Output};

use cnrt::{verify_schedule, TraceFile};

fn cnrt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cnrt")).args(args).env_remove("CNRT_CACHE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn route_emits_a_replayable_trace() {
    let o = cnrt(&["route", "--perm", "4,1,6,3,2,5", "--odd-edge", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    let file: TraceFile = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(file.odd_edge, Some([2, 3]));
    let check = verify_schedule(file.topology().unwrap(), &file.permutation().unwrap(), &file.matchings()).unwrap();
    assert!(check.sorted);
    assert_eq!(check.rounds_used, file.rounds_used);
}

#[test]
fn extremal_route_fits_n_minus_two() {
    let o = cnrt(&["route", "--perm", "4,5,6,3,2,1", "--strategy", "extremal"]);
    assert_eq!(o.status.code(), Some(0));
    let file: TraceFile = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(file.rounds_used <= 4);
}

#[test]
fn exit_codes() {
    assert_eq!(cnrt(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(cnrt(&["route", "--perm", "1,1,2"]).status.code(), Some(2));
    assert_eq!(cnrt(&["route", "--perm", "2,3,1"]).status.code(), Some(2));
    assert_eq!(cnrt(&["route", "--perm", "2,3,4,5,6,1", "--strategy", "extremal"]).status.code(), Some(1));
    let o = cnrt(&["verify", "rotation", "--n-max", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["suite"], "rotation");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
}

#[test]
fn exact_and_classify_lines() {
    let o = cnrt(&["exact", "--perm", "3,2,1,4"]);
    assert!(stdout(&o).starts_with("rt(C_4, 3,2,1,4) = 3\n"));

    let o = cnrt(&["classify", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first = text.lines().next().unwrap();
    let fields: Vec<&str> = first.split(' ').collect();
    assert_eq!(fields.len(), 5, "{first}");
    assert!(fields[3].starts_with("type"));
    assert!(text.lines().all(|l| l.contains("2,3,4,5,1") || l.contains("5,1,2,3,4")));
}

#[test]
fn table_export_import_and_cache_env() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c6.tbl");
    let out = cnrt(&["table", "export", "--n", "6", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let flag_dir = dir.path().join("flag");
    let env_dir = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_cnrt"))
        .args(["table", "import", file.to_str().unwrap(), "--cache-dir", flag_dir.to_str().unwrap(), "--json"])
        .env("CNRT_CACHE", &env_dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(summary["max"], 5);
    assert!(has_files(&env_dir));
    assert!(!flag_dir.exists());

    std::fs::write(&file, b"not a table").unwrap();
    assert_ne!(cnrt(&["table", "import", file.to_str().unwrap()]).status.code(), Some(0));
}

fn has_files(dir: &Path) -> bool {
    std::fs::read_dir(dir).map(|mut d| d.next().is_some()).unwrap_or(false)
}
