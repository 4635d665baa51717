use std::collections::{BTreeMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::record::{parse_record, read_records, RecordError, ResultRecord};
use crate::elimination::{check, Status, TestConfig};
use crate::structure::{lambda_family_params, planar_params, ParamError, ParamSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `(n² + n + 1, n + 1, 1)` for `2 <= n <= max_n`.
    Planar { max_n: u128 },
    /// Every admissible `(v, k, λ)` with fixed `λ` and `k <= max_k`.
    FixedLambda { lambda: u128, max_k: u128 },
    /// Triples listed in a file, one `v k λ` per line.
    List { path: PathBuf },
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub config: TestConfig,
    pub jobs: usize,
    pub out: PathBuf,
    pub resume: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total: usize,
    /// Parameters found in the output file and not recomputed.
    pub resumed: usize,
    pub by_status: BTreeMap<String, usize>,
    pub by_test: BTreeMap<String, usize>,
}

impl SweepSummary {
    pub fn of(records: &[ResultRecord]) -> Self {
        let mut s = SweepSummary::default();
        records.iter().for_each(|r| s.add(r));
        s
    }

    pub fn add(&mut self, r: &ResultRecord) {
        self.total += 1;
        *self.by_status.entry(r.status.to_string()).or_default() += 1;
        for t in r.tests() {
            *self.by_test.entry(t.to_string()).or_default() += 1;
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.by_status.get(&status.to_string()).copied().unwrap_or(0)
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("empty parameter range")]
    EmptyRange,
    #[error("need at least one worker")]
    NoWorkers,
    #[error("{path}: line {line}: {message}")]
    List { path: PathBuf, line: usize, message: String },
    #[error("existing output: {0}")]
    Records(#[from] RecordError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Parse a parameter list: `v k λ` per line (commas or whitespace),
/// `#` starts a comment.
pub fn parse_param_list(text: &str) -> Result<Vec<ParamSet>, (usize, String)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let [v, k, l] = nums[..] else {
            return Err((i + 1, format!("expected three numbers, got {}", nums.len())));
        };
        let parse = |s: &str| s.parse::<u128>().map_err(|e| (i + 1, format!("{s:?}: {e}")));
        let (v, k, l) = (parse(v)?, parse(k)?, parse(l)?);
        let p = ParamSet::admissible(v, k, l).map_err(|e: ParamError| (i + 1, e.to_string()))?;
        out.push(p);
    }
    Ok(out)
}

/// All parameter sets of a family, in family order.
pub fn family_params(family: &Family) -> Result<Vec<ParamSet>, SweepError> {
    let params = match family {
        Family::Planar { max_n } => (2..=*max_n).map(planar_params).collect(),
        Family::FixedLambda { lambda, max_k } => {
            (lambda + 1..=*max_k).filter_map(|k| lambda_family_params(k, *lambda)).collect()
        }
        Family::List { path } => {
            let text = std::fs::read_to_string(path)?;
            parse_param_list(&text).map_err(|(line, message)| SweepError::List {
                path: path.clone(),
                line,
                message,
            })?
        }
    };
    let params: Vec<ParamSet> = params;
    if params.is_empty() {
        return Err(SweepError::EmptyRange);
    }
    Ok(params)
}

/// Parameter sets per work chunk handed to a worker.
const CHUNK: usize = 256;

/// Check `params` on `jobs` threads and pass each record to `sink` as it
/// finishes, from the calling thread only.
pub fn run_params(
    params: &[ParamSet],
    config: &TestConfig,
    jobs: usize,
    mut sink: impl FnMut(ResultRecord) -> io::Result<()>,
) -> Result<(), SweepError> {
    if jobs == 0 {
        return Err(SweepError::NoWorkers);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let (tx, rx) = mpsc::sync_channel::<ResultRecord>(4 * CHUNK);
    let mut result = Ok(());
    std::thread::scope(|scope| {
        scope.spawn(move || {
            pool.install(|| {
                params.par_chunks(CHUNK).for_each_with(tx, |tx, chunk| {
                    for p in chunk {
                        // The receiver only hangs up after an I/O error; stop quietly.
                        if tx.send(ResultRecord::from_check(&check(p, config))).is_err() {
                            return;
                        }
                    }
                })
            })
        });
        for record in rx {
            if let Err(e) = sink(record) {
                result = Err(SweepError::Io(e));
                break;
            }
        }
    });
    result
}

/// In-memory sweep, records sorted by `(v, k, λ)`.
pub fn sweep_records(params: &[ParamSet], config: &TestConfig, jobs: usize) -> Result<Vec<ResultRecord>, SweepError> {
    let mut out = Vec::with_capacity(params.len());
    run_params(params, config, jobs, |r| {
        out.push(r);
        Ok(())
    })?;
    out.sort_by_key(ResultRecord::key);
    Ok(out)
}

/// Run a sweep into `spec.out`, one record per line, flushed per record.
/// With `resume`, parameters already in the file are skipped and a
/// partially written last line is discarded.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepSummary, SweepError> {
    let params = family_params(&spec.family)?;
    let key = |p: &ParamSet| (p.v(), p.k(), p.lambda());
    let wanted: HashSet<(u128, u128, u128)> = params.iter().map(key).collect();
    let mut summary = SweepSummary::default();
    let mut done = HashSet::new();
    let file = if spec.resume && spec.out.exists() {
        truncate_partial_line(&spec.out)?;
        for (i, line) in BufReader::new(File::open(&spec.out)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let r = parse_record(&line, i + 1)?;
            if wanted.contains(&r.key()) && done.insert(r.key()) {
                summary.add(&r);
                summary.resumed += 1;
            }
        }
        OpenOptions::new().append(true).open(&spec.out)?
    } else {
        File::create(&spec.out)?
    };
    let todo: Vec<ParamSet> = params.iter().filter(|p| !done.contains(&key(p))).copied().collect();
    let mut writer = BufWriter::new(file);
    run_params(&todo, &spec.config, spec.jobs, |r| {
        writeln!(writer, "{}", r.to_line())?;
        writer.flush()?;
        summary.add(&r);
        Ok(())
    })?;
    writer.flush()?;
    Ok(summary)
}

/// Drop anything after the last newline (an interrupted write).
fn truncate_partial_line(path: &Path) -> io::Result<()> {
    let mut f = OpenOptions::new().read(true).write(true).open(path)?;
    let len = f.metadata()?.len();
    if len == 0 {
        return Ok(());
    }
    let mut keep = 0u64;
    let mut reader = BufReader::new(&mut f);
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf)?;
        if n == 0 {
            break;
        }
        if buf.last() == Some(&b'\n') {
            keep += n as u64;
        }
    }
    drop(reader);
    if keep < len {
        f.set_len(keep)?;
    }
    f.seek(SeekFrom::End(0))?;
    Ok(())
}

/// Read records from a path, for reporting and re-verification.
pub fn load_records(path: &Path) -> Result<Vec<ResultRecord>, RecordError> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    read_records(text.as_bytes())
}
