//! Sweeps over parameter families, line-delimited JSON persistence, and
//! text reports.

mod record;
mod report;
mod sweep;

pub use record::{parse_record, read_records, RecordError, ResultRecord, RECORD_VERSION};
pub use report::{factorization_string, render, Format};
pub use sweep::{
    family_params, load_records, parse_param_list, run_params, run_sweep, sweep_records, Family, SweepError,
    SweepSpec, SweepSummary,
};
