use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn qholo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qholo"))
        .args(args)
        .current_dir(root())
        .env_remove("QHOLO_SEED")
        .env_remove("QHOLO_EXPECT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--out", "-"]);
    let o = qholo(&all);
    serde_json::from_slice(&o.stdout).expect("report on stdout")
}

#[test]
fn five_qubit_distance_meets_expectation() {
    let o = qholo(&["distance", "--fixture", "five-qubit", "--expect", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("distance 3"));
    assert_eq!(code(&qholo(&["distance", "--expect", "4"])), 1);
}

#[test]
fn toric_fixture_distance_is_the_period() {
    let o = qholo(&["distance", "--fixture", "toric-2", "--expect", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(code(&qholo(&["distance", "--max-weight", "0"])), 2);
    assert_eq!(code(&qholo(&["distance", "--fixture", "seven-qubit"])), 2);
    assert_eq!(code(&qholo(&["transversal", "flatness", "--expect", "1"])), 2);
    assert_eq!(code(&qholo(&["correctable"])), 2);
}

#[test]
fn missing_input_is_a_runtime_error() {
    assert_eq!(code(&qholo(&["distance", "--code", "no/such/file.json"])), 3);
}

#[test]
fn correctable_names_a_witness() {
    let r = report(&["correctable", "--weight", "2", "--expect", "false"]);
    assert_eq!(r["passed"], true);
    let w = &r["result"]["correction"]["witness"];
    assert!(w["error_a"].is_string() && w["error_b"].is_string(), "{w}");
}

#[test]
fn holonomy_gates() {
    for gate in ["X", "Z", "R3"] {
        let o = qholo(&["transversal", "holonomy", "--gate", gate, "--expect", "nontrivial"]);
        assert_eq!(code(&o), 0, "{gate}: {}", stdout(&o));
    }
    let o = qholo(&["transversal", "holonomy", "--gate", "stabilizer-1", "--expect", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PhaseOnly"));
}

#[test]
fn braid_documents() {
    for (file, expect) in [("full_braid", "-1"), ("contractible", "1"), ("half_braid", "1"), ("torus_loop", "pauli")] {
        let cfg = format!("configs/{file}.json");
        let o = qholo(&["toric", "braid", "--config", &cfg, "--expect", expect]);
        assert_eq!(code(&o), 0, "{file}: {}", stdout(&o));
    }
    let o = qholo(&["toric", "braid", "--config", "configs/full_braid.json", "--expect", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn braid_without_a_word_is_a_usage_error() {
    assert_eq!(code(&qholo(&["toric", "braid", "--config", "configs/face_checks.json"])), 2);
}

#[test]
fn toric_build_reports_four_codewords() {
    let r = report(&["toric", "build", "--config", "configs/l2_four_defects.json", "--expect", "4"]);
    assert_eq!(r["result"]["k"], 4);
    assert_eq!(r["passed"], true);
}

#[test]
fn env_overrides_mirror_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_qholo"))
        .args(["distance"])
        .env("QHOLO_EXPECT", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn report_shape_and_merge() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("merge");
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    assert_eq!(code(&qholo(&["distance", "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&qholo(&["distance", "--expect", "5", "--out", b.to_str().unwrap()])), 1);
    let ra: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    for key in ["schema_version", "tool", "version", "command", "timestamp", "config", "result", "checks", "passed"] {
        assert!(ra.get(key).is_some(), "missing {key}");
    }
    assert_eq!(ra["config"]["seed"], 0);

    let merged = report(&["report-merge", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(merged["result"]["reports"].as_array().unwrap().len(), 2);
    assert_eq!(merged["passed"], false);
    let o = qholo(&["report-merge", a.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
}
