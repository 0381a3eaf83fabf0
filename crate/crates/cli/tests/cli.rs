use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dismantle"))
        .args(args)
        .env_remove("DISMANTLE_ORDER_CAP")
        .env_remove("DISMANTLE_SUBGROUP_LIMIT")
        .env_remove("DISMANTLE_CROWN_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn check_exits_zero_on_agreement() {
    let o = run(&["check", "A:5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("not in D"));
    assert!(text.contains("crown"));
}

#[test]
fn check_json_has_schema_and_crown() {
    let o = run(&["check", "S:4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["computed"], "not-in-d");
    assert_eq!(v["witness"]["kind"], "crown");
}

#[test]
fn bad_spec_exits_two() {
    let o = run(&["check", "M:2,3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
}

#[test]
fn caps_are_enforced() {
    assert_eq!(run(&["--order-cap", "100", "check", "S:5"]).status.code(), Some(2));
    assert_eq!(run(&["--subgroup-limit", "10", "check", "S:4"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_dismantle"))
        .args(["check", "S:5"])
        .env("DISMANTLE_ORDER_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    for args in [&["export", "D:24", "--format", "dot"][..], &["survey", "S:4", "--json"], &["check", "Ab:3,3,3"], &["check", "D:24", "--json"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn export_writes_file() {
    let path = std::env::temp_dir().join(format!("dismantle-export-{}.dot", std::process::id()));
    let o = run(&["export", "Z:8", "--format", "dot", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 3);
}

#[test]
fn survey_flags_counterexample() {
    let o = run(&["survey", "S:4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("counterexample to open problem: yes"));
}

#[test]
fn timings_are_opt_in() {
    let plain = stdout(&run(&["check", "Q:8", "--json"]));
    assert!(!plain.contains("timings"));
    let timed: serde_json::Value = serde_json::from_slice(&run(&["check", "Q:8", "--json", "--timings"]).stdout).unwrap();
    assert!(timed["timings"]["lattice_ms"].as_f64().is_some());
}
