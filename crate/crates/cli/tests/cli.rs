use std::process::{Command, Output};

fn diffset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffset")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_prints_the_orbit_witness() {
    let out = diffset(&["check", "352", "27", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("(352,27,2): eliminated (coverage: all_abelian)"), "{text}");
    assert!(text.contains("p = 11, |H| = 32, exp(H) = 32, m = 5 ≡ 5, s = 8, o = 5"), "{text}");
}

#[test]
fn check_json_round_trips() {
    let out = diffset(&["check", "525826", "1026", "2", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "open");
    assert_eq!(v["coverage"], "cyclic_only");
    let last = v["per_exponent"].as_array().unwrap().last().unwrap();
    assert_eq!(last["witness"]["evidence"]["contracted_order"]["order"], 26565);
}

#[test]
fn check_handles_counting_failures_and_errors() {
    let out = diffset(&["check", "10", "4", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("counting"));
    let out = diffset(&["check", "7", "3", "1", "--tests", "t9"]);
    assert!(!out.status.success());
    let out = diffset(&["check", "352", "27", "2", "--tests", "brc"]);
    assert!(stdout(&out).starts_with("(352,27,2): open"));
}

#[test]
fn sweep_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("planar.jsonl");
    let path = path.to_str().unwrap();
    let out = diffset(&["sweep", "--family", "planar", "--max-n", "50", "--jobs", "2", "--out", path]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("records: 49 (resumed 0)"));
    let out = diffset(&["sweep", "--family", "planar", "--max-n", "60", "--out", path, "--resume", "--json"]);
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["total"], 59);
    assert_eq!(summary["resumed"], 49);
    assert!(summary["by_status"].get("open").is_none());

    let out = diffset(&["report", "--in", path, "--format", "summary"]);
    let text = stdout(&out);
    assert!(text.starts_with("records: 59\n"), "{text}");
    assert!(text.contains("open: 0"));
    let out = diffset(&["report", "--in", path]);
    let table = stdout(&out);
    assert_eq!(table.lines().count(), 60);
    let first: Vec<&str> = table.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(first, ["3", "2", "7", "exists", "singer"]);
}

#[test]
fn sweep_rejects_mixed_families() {
    let out = diffset(&["sweep", "--family", "planar", "--max-n", "5", "--lambda", "2", "--max-k", "9", "--out", "x"]);
    assert!(!out.status.success());
}

#[test]
fn oracle_and_verify() {
    let out = diffset(&["oracle", "--order", "16", "--k", "6", "--lambda", "2"]);
    let text = stdout(&out);
    assert!(text.contains("Z[16]: absent"), "{text}");
    assert_eq!(text.matches("found").count(), 4);

    let out = diffset(&["verify", "--order", "7", "--set", "0;1;3", "--lambda", "1"]);
    assert_eq!(stdout(&out), "valid\n");
    let out = diffset(&["verify", "--order", "7", "--set", "0;1;2", "--lambda", "1"]);
    assert_eq!(stdout(&out), "invalid\n");
    let out = diffset(&["verify", "--order", "16", "--group", "4,4", "--set", "0,0;0,1;1,0;1,2;2,0;2,3", "--lambda", "2"]);
    assert!(out.status.success());
    let out = diffset(&["verify", "--order", "12", "--group", "4,4", "--set", "0,0", "--lambda", "1"]);
    assert!(!out.status.success());
}

#[test]
fn cross_validate_small() {
    let out = diffset(&["cross-validate", "--max-v", "40", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["max_v"], 40);
    assert!(!report["entries"].as_array().unwrap().is_empty());
}
