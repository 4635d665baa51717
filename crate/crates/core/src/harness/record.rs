use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elimination::{CheckResult, Coverage, Status, Witness};
use crate::structure::ParamSet;

/// Version stamped on every record; bump when the schema changes.
pub const RECORD_VERSION: &str = concat!("diffset/", env!("CARGO_PKG_VERSION"), "/1");

/// One line of sweep output. Field order is fixed so files diff cleanly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub v: u128,
    pub k: u128,
    pub lambda: u128,
    pub status: Status,
    pub coverage: Option<Coverage>,
    /// Tests that produced a witness, joined with `+`; the catalog family for `exists`.
    pub test: Option<String>,
    pub witnesses: Vec<Witness>,
    pub reason: Option<String>,
    pub elapsed_ms: u64,
    pub version: String,
}

impl ResultRecord {
    pub fn from_check(r: &CheckResult) -> Self {
        let test = match (&r.construction, r.status) {
            (Some(c), Status::Exists) => Some(
                serde_json::to_value(&c.family)
                    .ok()
                    .and_then(|v| match v {
                        serde_json::Value::String(s) => Some(s),
                        serde_json::Value::Object(m) => m.keys().next().cloned(),
                        _ => None,
                    })
                    .unwrap_or_else(|| "catalog".into()),
            ),
            _ => {
                let used = r.tests_used();
                (!used.is_empty()).then(|| used.iter().map(|t| t.name()).collect::<Vec<_>>().join("+"))
            }
        };
        ResultRecord {
            v: r.params.v(),
            k: r.params.k(),
            lambda: r.params.lambda(),
            status: r.status,
            coverage: r.coverage,
            test,
            witnesses: r.witnesses().cloned().collect(),
            reason: r.reason.clone(),
            elapsed_ms: r.elapsed_ms,
            version: RECORD_VERSION.to_string(),
        }
    }

    pub fn key(&self) -> (u128, u128, u128) {
        (self.v, self.k, self.lambda)
    }

    pub fn params(&self) -> Option<ParamSet> {
        ParamSet::admissible(self.v, self.k, self.lambda).ok()
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }

    /// Test names listed in `test`.
    pub fn tests(&self) -> impl Iterator<Item = &str> {
        self.test.iter().flat_map(|t| t.split('+'))
    }
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: parameters ({v},{k},{lambda}) are not admissible")]
    Params { line: usize, v: u128, k: u128, lambda: u128 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parse one record line. `line` is 1-based and only used in errors.
pub fn parse_record(text: &str, line: usize) -> Result<ResultRecord, RecordError> {
    let r: ResultRecord = serde_json::from_str(text).map_err(|source| RecordError::Parse { line, source })?;
    if r.params().is_none() {
        return Err(RecordError::Params {
            line,
            v: r.v,
            k: r.k,
            lambda: r.lambda,
        });
    }
    Ok(r)
}

/// Read every record, skipping blank lines.
pub fn read_records(reader: impl BufRead) -> Result<Vec<ResultRecord>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_record(&line, i + 1)?);
    }
    Ok(out)
}
