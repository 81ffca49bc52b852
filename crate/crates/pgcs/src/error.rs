//! Crate-wide error type.

use std::path::PathBuf;

/// Errors raised by the schedule, the optimizers, and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("{op}: argument {value} is outside {domain}")]
    Domain {
        op: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// A configuration value violates its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An objective name that the registry does not know.
    #[error("unknown objective `{0}` (expected one of: f1, f2, f3)")]
    UnknownObjective(String),

    /// The objective produced a non-finite value where one is not tolerated.
    #[error("objective returned a non-finite value at {position:?}")]
    NonFiniteObjective { position: Vec<f64> },

    /// A report could not be written.
    #[error("cannot write report to `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Report (de)serialization failed.
    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
