mod describe;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diffset::elimination::{check, verify_counting, Evidence, Scope, TestConfig, TestSet, Witness};
use diffset::harness::{load_records, render, run_sweep, Family, Format, SweepSpec};
use diffset::oracle::{
    cross_validate, enumerate_abelian_groups, exhaustive_search_with, parse_elements, parse_group,
    verify_difference_set, AbelianGroup, CandidateSet, OracleError, SearchConfig,
};
use diffset::structure::{ParamError, ParamSet};

#[derive(Parser)]
#[command(name = "diffset", version, about = "Nonexistence tests for abelian difference sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every enabled test on one parameter set.
    Check {
        v: u128,
        k: u128,
        lambda: u128,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Check a whole parameter family, writing one JSON record per line.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        /// Skip parameters already present in the output file.
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Exhaustive search for a difference set in small groups.
    Oracle {
        #[arg(long)]
        order: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        lambda: u64,
        /// Invariant factors, e.g. `2,6`; every group of the order if omitted.
        #[arg(long)]
        group: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check that an explicit set is a difference set.
    Verify {
        #[arg(long)]
        order: u64,
        /// Invariant factors; the cyclic group if omitted.
        #[arg(long)]
        group: Option<String>,
        /// Elements as `;`-separated residue tuples, e.g. `0,1;1,3`.
        #[arg(long)]
        set: String,
        #[arg(long)]
        lambda: u64,
    },
    /// Compare every elimination with exhaustive search up to a group order.
    CrossValidate {
        #[arg(long)]
        max_v: u64,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Render sweep records.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "table")]
        format: Format,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Tests to run: any of t3, t6, t4, t5, brc (comma-separated).
    #[arg(long)]
    tests: Option<TestSet>,
    /// Multiplier-group elements enumerated by the collision test.
    #[arg(long)]
    t6_budget: Option<usize>,
    /// Multiplier candidates tried per prime by orbit counting.
    #[arg(long)]
    mult_cap: Option<usize>,
    /// Rho iterations allowed per factorization.
    #[arg(long)]
    factor_iterations: Option<u64>,
    /// Treat probable primes above the proven bound as inconclusive.
    #[arg(long)]
    proven_primes: bool,
}

impl ConfigArgs {
    fn config(&self) -> TestConfig {
        let mut c = TestConfig::default();
        if let Some(t) = self.tests {
            c.tests = t;
        }
        if let Some(b) = self.t6_budget {
            c.collision_budget = b;
        }
        if let Some(m) = self.mult_cap {
            c.candidate_cap = m;
        }
        if let Some(f) = self.factor_iterations {
            c.factor_budget.rho_iterations = f;
        }
        c.require_proven_primes = self.proven_primes;
        c
    }
}

#[derive(Args)]
#[group(required = true, multiple = true)]
struct FamilyArgs {
    /// `planar` (with --max-n).
    #[arg(long, requires = "max_n", conflicts_with_all = ["lambda", "list"])]
    family: Option<String>,
    #[arg(long)]
    max_n: Option<u128>,
    /// Fixed λ (with --max-k).
    #[arg(long, requires = "max_k", conflicts_with = "list")]
    lambda: Option<u128>,
    #[arg(long)]
    max_k: Option<u128>,
    /// File of `v k λ` lines.
    #[arg(long)]
    list: Option<PathBuf>,
}

impl FamilyArgs {
    fn family(&self) -> std::result::Result<Family, String> {
        match (&self.family, self.lambda, &self.list) {
            (Some(f), None, None) if f == "planar" => Ok(Family::Planar {
                max_n: self.max_n.ok_or("--family planar needs --max-n")?,
            }),
            (Some(f), _, _) => Err(format!("unknown family {f:?} (only planar)")),
            (None, Some(lambda), None) => Ok(Family::FixedLambda {
                lambda,
                max_k: self.max_k.ok_or("--lambda needs --max-k")?,
            }),
            (None, None, Some(path)) => Ok(Family::List { path: path.clone() }),
            _ => Err("give one of --family planar, --lambda, --list".into()),
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Search-tree nodes per group before giving up.
    #[arg(long)]
    budget: Option<u64>,
    /// Skip the orbit restriction and backtrack over all subsets.
    #[arg(long)]
    plain: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        let mut c = SearchConfig::default();
        if let Some(b) = self.budget {
            c.node_budget = b;
        }
        c.use_multipliers = !self.plain;
        c
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Exit status when the audit finds an elimination contradicted by a set.
const CONTRADICTION: u8 = 3;

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

type Result<T> = std::result::Result<T, Box<dyn std::error::Error>>;

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check {
            v,
            k,
            lambda,
            json,
            config,
        } => cmd_check(v, k, lambda, json, &config.config()),
        Command::Sweep {
            family,
            jobs,
            out,
            resume,
            json,
            config,
        } => {
            let spec = SweepSpec {
                family: family.family()?,
                config: config.config(),
                jobs,
                out,
                resume,
            };
            let summary = run_sweep(&spec)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                println!("records: {} (resumed {})", summary.total, summary.resumed);
                for (status, n) in &summary.by_status {
                    println!("{status}: {n}");
                }
                for (test, n) in &summary.by_test {
                    println!("test {test}: {n}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            order,
            k,
            lambda,
            group,
            search,
            json,
        } => cmd_oracle(order, k, lambda, group.as_deref(), &search.config(), json),
        Command::Verify {
            order,
            group,
            set,
            lambda,
        } => {
            let group = group_for(order, group.as_deref())?;
            let elements = parse_elements(&set, &group)?;
            let ok = verify_difference_set(&CandidateSet { group, elements }, lambda);
            println!("{}", if ok { "valid" } else { "invalid" });
            Ok(ExitCode::SUCCESS)
        }
        Command::CrossValidate { max_v, search, json } => {
            let report = cross_validate(max_v, &TestConfig::default(), &search.config())?;
            let bad: Vec<_> = report.contradictions().collect();
            if json {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                let found: Vec<String> = report
                    .found()
                    .map(|e| format!("{} in Z{:?}", e.params, e.group.invariant_factors()))
                    .collect();
                println!("parameter/group pairs: {}", report.entries.len());
                println!("sets found: {}", found.len());
                for f in &found {
                    println!("  {f}");
                }
                println!("eliminations confirmed by search: {}", report.confirmed());
                println!("searches stopped at budget: {}", report.unresolved());
                println!("contradictions: {}", bad.len());
                for e in &bad {
                    println!("  {} in Z{:?}", e.params, e.group.invariant_factors());
                }
            }
            Ok(if bad.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(CONTRADICTION)
            })
        }
        Command::Report { input, format } => {
            print!("{}", render(&load_records(&input)?, format));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_check(v: u128, k: u128, lambda: u128, json: bool, config: &TestConfig) -> Result<ExitCode> {
    let params = match ParamSet::admissible(v, k, lambda) {
        Ok(p) => p,
        Err(ParamError::Counting { lhs, rhs }) => {
            debug_assert!(verify_counting(v, k, lambda, lhs, rhs));
            let w = Witness {
                scope: Scope::AllAbelian,
                evidence: Evidence::Counting { lhs, rhs },
            };
            if json {
                println!("{}", serde_json::json!({"v": v, "k": k, "lambda": lambda, "status": "eliminated", "witness": w}));
            } else {
                println!("({v},{k},{lambda}): eliminated");
                println!("  {}", describe::witness(&w));
            }
            return Ok(ExitCode::SUCCESS);
        }
        Err(e) => return Err(e.into()),
    };
    let result = check(&params, config);
    if json {
        println!("{}", serde_json::to_string_pretty(&result)?);
    } else {
        print!("{}", describe::result(&result));
    }
    Ok(ExitCode::SUCCESS)
}

fn group_for(order: u64, group: Option<&str>) -> Result<AbelianGroup> {
    let g = match group {
        Some(text) => parse_group(text)?,
        None => AbelianGroup::cyclic(order),
    };
    if g.order() != order {
        return Err(format!("group Z{:?} has order {}, not {order}", g.invariant_factors(), g.order()).into());
    }
    Ok(g)
}

fn cmd_oracle(order: u64, k: u64, lambda: u64, group: Option<&str>, search: &SearchConfig, json: bool) -> Result<ExitCode> {
    let groups = match group {
        Some(_) => vec![group_for(order, group)?],
        None => enumerate_abelian_groups(order),
    };
    let mut rows = Vec::new();
    for g in groups {
        let outcome = match exhaustive_search_with(&g, k, lambda, search) {
            Ok(Some(set)) => serde_json::json!({"found": set.elements}),
            Ok(None) => serde_json::json!("absent"),
            Err(OracleError::Budget { nodes }) => serde_json::json!({"unresolved": nodes}),
            Err(e) => return Err(e.into()),
        };
        if !json {
            let text = match &outcome {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Object(m) if m.contains_key("found") => {
                    format!("found {}", describe::elements(&m["found"]))
                }
                _ => "unresolved (node budget)".into(),
            };
            println!("Z{:?}: {text}", g.invariant_factors());
        }
        rows.push(serde_json::json!({"group": g.invariant_factors(), "outcome": outcome}));
    }
    if json {
        println!("{}", serde_json::Value::Array(rows));
    }
    Ok(ExitCode::SUCCESS)
}
