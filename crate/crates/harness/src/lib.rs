//! Experiment harness for the sampler library: declarative JSON experiment
//! configurations, deterministic synthetic data, replicated chains with
//! per-replication diagnostics, and CSV/JSON reports shaped like the
//! simulation-study tables.
//!
//! Determinism contract: everything except wall-clock fields is a pure
//! function of `(seed, rep_index)`. Replications run on disjoint RNG streams
//! (`stream_id = rep_index` for the chain, a salted seed for the data), so
//! serial and parallel execution produce bit-identical draws and reports.

pub mod config;
pub mod data;
pub mod report;
pub mod run;

pub use config::{Alpha0, ChainSpec, DataSpec, ExperimentSpec, Method, ModelKind, PriorSpec};
pub use data::{gen_data, Dataset};
pub use report::{read_csv, read_json, write_csv, write_json, ReportRow};
pub use run::{run_experiment, ExperimentResult, PersistedExperiment, RepSummary};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error at {field}: {message}")]
    Config { field: String, message: String },

    #[error("sampler error: {0}")]
    Sampler(#[from] recipgamma::Error),

    #[error("{failed} of {total} replications failed (> 5%); first error: {first}")]
    TooManyFailures {
        failed: usize,
        total: usize,
        first: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serde(String),

    #[error("report rows are empty")]
    EmptyReport,
}

impl HarnessError {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        HarnessError::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
