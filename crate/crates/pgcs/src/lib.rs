//! Derivative-free optimization built around three cooperating pieces:
//!
//! - [`powell`] — Powell's conjugate-direction minimizer with a
//!   bracketing/Brent line search ([`line_search`]); excellent at riding a
//!   basin to its bottom, helpless against traps and plateaus.
//! - [`gcs`] — Gaussian Crunching Search: greedy stochastic descent whose
//!   mutation width follows the periodic bounded-wave schedule of [`wave`],
//!   sweeping every scale from a floor (default 0) to a ceiling (default
//!   infinite, capped); escapes traps, but polishes slowly.
//! - [`hybrid`] — P-GCS: the crunching loop with Powell run from every
//!   improving candidate, keeping whichever point is strictly better.
//!
//! The [`objectives`] module ships the three benchmark landscapes (`f1`,
//! `f2`, `f3`) that showcase the trade-off, and [`report`] runs
//! method x benchmark x seed experiment matrices with JSON/CSV reports. The
//! `pgcs` binary exposes the same through `run`, `tables`, and `list`
//! subcommands.
//!
//! # Quick start
//!
//! ```
//! use pgcs::{make_objective, powell_minimize, run_pgcs, HybridConfig, PowellConfig};
//!
//! # fn main() -> pgcs::Result<()> {
//! // Powell alone gets trapped in f1's spurious minimum near x = 1198.6 ...
//! let f1 = make_objective("f1", 1)?;
//! let trapped = powell_minimize(|x| f1.eval(x), &[1200.0], &PowellConfig::default())?;
//! assert!(trapped.f > 399.0);
//!
//! // ... while the hybrid escapes it (seeded, hence reproducible).
//! let mut config = HybridConfig::default();
//! config.gcs.seed = 1;
//! let escaped = run_pgcs(&f1, &[1200.0], &config)?;
//! assert!(escaped.final_val < 0.05);
//! # Ok(())
//! # }
//! ```
//!
//! # Runnable examples
//!
//! One per capability, under `examples/`:
//!
//! ```bash
//! cargo run --release -p pgcs --example wave_schedule     # the sd schedule itself
//! cargo run --release -p pgcs --example powell_quadratic  # conjugate-direction exactness
//! cargo run --release -p pgcs --example powell_trapped    # the three trap landscapes
//! cargo run --release -p pgcs --example gcs_escape        # plain crunching search escape
//! cargo run --release -p pgcs --example pgcs_hybrid       # the hybrid end to end
//! cargo run --release -p pgcs --example benchmark_tables  # full comparison tables
//! cargo run --release -p pgcs --example export_report     # JSON/CSV report files
//! ```
//!
//! # Reproducibility
//!
//! Every stochastic component draws from [`gcs::GaussianSampler`]: ChaCha8
//! seeded via `seed_from_u64`, uniforms taken as the top 53 bits of each
//! word mapped to `(0, 1]`, normals by Box-Muller. Same seed, same run,
//! bit for bit — the sampler is part of the crate's contract and golden
//! tests pin its stream. Powell consumes no randomness at all.

pub mod error;
pub mod gcs;
pub mod hybrid;
pub mod line_search;
pub mod objectives;
pub mod powell;
pub mod report;
pub mod wave;

pub use error::{Error, Result};
pub use gcs::{
    gcs_step, propose, run_gcs, GaussianSampler, GcsConfig, GcsState, Refiner, RunResult,
    RunTermination, StepReport,
};
pub use hybrid::{run_pgcs, HybridConfig, PowellRefiner};
pub use line_search::{bracket_minimum, brent_line_min, Bracket, BracketFailure, LineMin};
pub use objectives::{make_objective, EvalCounter, ObjectiveSpec};
pub use powell::{
    line_minimize, powell_minimize, DirectionSet, PowellConfig, PowellOutcome, PowellTermination,
};
pub use report::{
    benchmark_tables, emit_report, preset, read_config, run_experiment, ExperimentConfig,
    ExperimentReport, Method, ReportFormat, ReportRow, WaveUpper, PRESET_NAMES, SCHEMA_VERSION,
};
pub use wave::{
    cycle_phase, phase_to_sd, sd_to_phase, wave, WaveCache, WaveParams, DEFAULT_PERIOD,
    DEFAULT_SD_CAP,
};
