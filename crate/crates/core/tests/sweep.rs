use std::collections::BTreeMap;
use std::fs;

use diffset::elimination::{verify_witness, Status, TestConfig};
use diffset::harness::{load_records, render, run_sweep, Family, Format, ResultRecord, SweepSpec};
use diffset::structure::lambda_family_params;

fn spec(family: Family, out: &std::path::Path, jobs: usize, resume: bool) -> SweepSpec {
    SweepSpec {
        family,
        config: TestConfig::default(),
        jobs,
        out: out.to_path_buf(),
        resume,
    }
}

fn by_key(records: Vec<ResultRecord>) -> BTreeMap<(u128, u128, u128), ResultRecord> {
    records
        .into_iter()
        .map(|mut r| {
            r.elapsed_ms = 0;
            (r.key(), r)
        })
        .collect()
}

#[test]
fn resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let full = dir.path().join("full.jsonl");
    let cut = dir.path().join("cut.jsonl");
    let family = Family::Planar { max_n: 3000 };
    let summary = run_sweep(&spec(family.clone(), &full, 3, false)).unwrap();
    assert_eq!(summary.total, 2999);

    // Keep a third of the lines plus half of the next one, as if killed mid-write.
    let text = fs::read_to_string(&full).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let mut partial: String = lines[..1000].iter().map(|l| format!("{l}\n")).collect();
    partial.push_str(&lines[1000][..lines[1000].len() / 2]);
    fs::write(&cut, partial).unwrap();

    let resumed = run_sweep(&spec(family, &cut, 2, true)).unwrap();
    assert_eq!(resumed.resumed, 1000);
    assert_eq!(resumed.total, 2999);
    assert_eq!(resumed.by_status, summary.by_status);
    let a = by_key(load_records(&full).unwrap());
    let b = by_key(load_records(&cut).unwrap());
    assert_eq!(a.len(), 2999);
    assert_eq!(a, b);

    // A second resume has nothing left to do.
    let again = run_sweep(&spec(Family::Planar { max_n: 3000 }, &cut, 1, true)).unwrap();
    assert_eq!(again.resumed, 2999);
    assert_eq!(load_records(&cut).unwrap().len(), 2999);
}

#[test]
fn reloaded_witnesses_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("biplanes.jsonl");
    run_sweep(&spec(Family::FixedLambda { lambda: 2, max_k: 200 }, &out, 2, false)).unwrap();
    let records = load_records(&out).unwrap();
    let mut eliminated = 0;
    for r in &records {
        let p = r.params().unwrap();
        if r.status == Status::Eliminated {
            eliminated += 1;
            assert!(!r.witnesses.is_empty(), "{p}");
        }
        for w in &r.witnesses {
            assert!(verify_witness(w, &p), "{p}: {w:?}");
        }
    }
    assert!(eliminated > 100);

    let status = |k: u128| {
        let p = lambda_family_params(k, 2).unwrap();
        records.iter().find(|r| r.params() == Some(p)).unwrap().status
    };
    assert_eq!(status(27), Status::Eliminated);
    for k in [3, 4, 5, 6, 9] {
        assert_eq!(status(k), Status::Exists, "k = {k}");
    }
    for r in &records {
        assert!(r.status != Status::Exists || [3, 4, 5, 6, 9].contains(&r.k), "k = {}", r.k);
    }
}

const OPEN_TRIPLANES: &str = "\
# v k lambda
4761 120 3
64681 441 3
1840051 2350 3
182733434811 740406 3
4797048929975 3793567 3
28002937687059795 289842739 3
";

#[test]
fn open_list_stays_open_and_reports_sorted() {
    let dir = tempfile::tempdir().unwrap();
    let list = dir.path().join("open.txt");
    // Reverse the order on disk; the report sorts by k.
    let mut lines: Vec<&str> = OPEN_TRIPLANES.lines().collect();
    lines[1..].reverse();
    fs::write(&list, lines.join("\n")).unwrap();
    let out = dir.path().join("open.jsonl");
    let summary = run_sweep(&spec(Family::List { path: list }, &out, 2, false)).unwrap();
    assert_eq!(summary.total, 6);
    assert_eq!(summary.count(Status::Open), 6);

    let records = load_records(&out).unwrap();
    let table = render(&records, Format::Table);
    let rows: Vec<&str> = table.lines().collect();
    assert_eq!(rows.len(), 7);
    let ks: Vec<&str> = rows[1..].iter().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(ks, ["120", "441", "2350", "740406", "3793567", "289842739"]);
    assert!(rows[1].contains("3^2 · 13") && rows[1].contains("3^2 · 23^2"));
    assert!(rows[6].contains("3 · 5 · 23 · 103^2 · 137 · 223^2 · 1123"));
    assert!(render(&records, Format::Summary).contains("open: 6"));
}

#[test]
fn malformed_records_report_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad.jsonl");
    run_sweep(&spec(Family::Planar { max_n: 4 }, &out, 1, false)).unwrap();
    let mut text = fs::read_to_string(&out).unwrap();
    text.push_str("{\"v\":1}\n");
    fs::write(&out, text).unwrap();
    let err = load_records(&out).unwrap_err().to_string();
    assert!(err.contains("line 4"), "{err}");
}
