use std::fmt::Write;
use std::str::FromStr;

use super::record::ResultRecord;
use super::sweep::SweepSummary;
use crate::arith;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Summary,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" => Ok(Format::Table),
            "summary" => Ok(Format::Summary),
            _ => Err(format!("unknown format {s:?} (expected table or summary)")),
        }
    }
}

/// `5 · 219277`, `109^2 · 1171`; the bare number if factoring gives up.
pub fn factorization_string(x: u128) -> String {
    if x < 2 {
        return x.to_string();
    }
    match arith::factor(x) {
        Ok(f) => f
            .factors()
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join(" · "),
        Err(_) => x.to_string(),
    }
}

pub fn render(records: &[ResultRecord], format: Format) -> String {
    match format {
        Format::Table => table(records),
        Format::Summary => summary(records),
    }
}

fn table(records: &[ResultRecord]) -> String {
    let mut sorted: Vec<&ResultRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.k, r.v, r.lambda));
    let header = ["k", "n", "v", "status", "test"].map(String::from);
    let rows: Vec<[String; 5]> = sorted
        .iter()
        .map(|r| {
            [
                r.k.to_string(),
                factorization_string(r.k - r.lambda),
                factorization_string(r.v),
                r.status.to_string(),
                r.test.clone().unwrap_or_else(|| "-".into()),
            ]
        })
        .collect();
    let mut width = header.clone().map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}

fn summary(records: &[ResultRecord]) -> String {
    let s = SweepSummary::of(records);
    let mut out = String::new();
    writeln!(out, "records: {}", s.total).unwrap();
    for status in ["exists", "eliminated", "open"] {
        writeln!(out, "{status}: {}", s.by_status.get(status).copied().unwrap_or(0)).unwrap();
    }
    for (test, n) in &s.by_test {
        writeln!(out, "test {test}: {n}").unwrap();
    }
    out
}
