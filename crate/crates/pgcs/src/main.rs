use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use pgcs::{
    emit_report, preset, read_config, run_experiment, ExperimentConfig, Method, ReportFormat,
    WaveUpper, PRESET_NAMES,
};

/// Derivative-free optimization benchmarks: Powell, GCS, and the P-GCS hybrid.
#[derive(Debug, Parser)]
#[command(name = "pgcs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment matrix and emit a JSON or CSV report.
    Run(RunArgs),
    /// Reproduce the three benchmark comparison tables.
    Tables(TablesArgs),
    /// List the built-in benchmark presets.
    List,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON experiment config (same schema as the report's config_echo).
    #[arg(long, value_name = "FILE", conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Start from a named preset (see `pgcs list`).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,

    /// Objective name: f1, f2, or f3.
    #[arg(long)]
    function: Option<String>,

    /// Problem dimension (f1: 1, f2: 2, f3: any >= 1).
    #[arg(long)]
    dim: Option<usize>,

    /// Start point, comma-separated (e.g. --start 600,600).
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_hyphen_values = true)]
    start: Option<Vec<f64>>,

    /// Methods to run, comma-separated subset of powell,gcs,pgcs.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    method: Option<Vec<Method>>,

    /// Seeds for the stochastic methods, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    seed: Option<Vec<u64>>,

    /// Success threshold on the objective value.
    #[arg(long)]
    target: Option<f64>,

    /// Proposal budget for gcs/pgcs.
    #[arg(long)]
    max_iters: Option<u64>,

    /// Crunch steps per wave cycle.
    #[arg(long)]
    period: Option<usize>,

    /// Wave floor (lower sd bound).
    #[arg(long)]
    wave_a: Option<f64>,

    /// Wave ceiling (upper sd bound); accepts `inf`.
    #[arg(long, value_parser = parse_wave_upper)]
    wave_b: Option<f64>,

    /// Finite stand-in for an infinite wave ceiling.
    #[arg(long)]
    sd_cap: Option<f64>,

    /// Powell line-search tolerance.
    #[arg(long)]
    xtol: Option<f64>,

    /// Powell convergence tolerance.
    #[arg(long)]
    ftol: Option<f64>,

    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, default_value = "json")]
    format: ReportFormatArg,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ReportFormatArg {
    Json,
    Csv,
}

impl From<ReportFormatArg> for ReportFormat {
    fn from(value: ReportFormatArg) -> Self {
        match value {
            ReportFormatArg::Json => ReportFormat::Json,
            ReportFormatArg::Csv => ReportFormat::Csv,
        }
    }
}

fn parse_wave_upper(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

#[derive(Debug, Args)]
struct TablesArgs {
    /// Where to write the JSON report (default benchmark_tables.json).
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

impl RunArgs {
    fn build_config(&self) -> anyhow::Result<ExperimentConfig> {
        let mut config = if let Some(path) = &self.config {
            read_config(path).with_context(|| format!("loading config {}", path.display()))?
        } else if let Some(name) = &self.preset {
            preset(name)?
        } else if let Some(function) = &self.function {
            ExperimentConfig::for_function(function)
        } else {
            anyhow::bail!("one of --config, --preset, or --function is required");
        };

        if let Some(function) = &self.function {
            config.function = function.clone();
        }
        if let Some(dim) = self.dim {
            config.dimension = Some(dim);
        }
        if let Some(start) = &self.start {
            config.start = Some(start.clone());
        }
        if let Some(methods) = &self.method {
            config.methods = methods.clone();
        }
        if let Some(seeds) = &self.seed {
            config.seeds = Some(seeds.clone());
        }
        if let Some(target) = self.target {
            config.target = Some(target);
        }
        if let Some(n) = self.max_iters {
            config.max_outer_iters = Some(n);
        }
        if let Some(period) = self.period {
            config.period = Some(period);
        }
        if let Some(a) = self.wave_a {
            config.wave_lower = Some(a);
        }
        if let Some(b) = self.wave_b {
            config.wave_upper = Some(WaveUpper(b));
        }
        if let Some(cap) = self.sd_cap {
            config.sd_cap = Some(cap);
        }
        if let Some(xtol) = self.xtol {
            config.xtol = Some(xtol);
        }
        if let Some(ftol) = self.ftol {
            config.ftol = Some(ftol);
        }
        Ok(config)
    }
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let config = args.build_config()?;
            let report = run_experiment(&config)?;
            emit_report(&report, args.format.into(), args.output.as_deref())?;
            if let Some(path) = &args.output {
                eprintln!("wrote {} rows to {}", report.rows.len(), path.display());
            }
        }
        Command::Tables(args) => {
            pgcs::benchmark_tables(args.output.as_deref())?;
            let path = args
                .output
                .unwrap_or_else(|| PathBuf::from("benchmark_tables.json"));
            eprintln!("wrote JSON report to {}", path.display());
        }
        Command::List => {
            for name in PRESET_NAMES {
                let resolved = preset(name)?.resolve()?;
                println!(
                    "{name}: function {}, dimension {}, start {:?}, target {}, proposals {}, period {}, wave [{}, inf) capped at {:.0e}",
                    resolved.function,
                    resolved.dimension.unwrap_or_default(),
                    resolved.start.as_deref().unwrap_or_default(),
                    resolved.target.unwrap_or_default(),
                    resolved.max_outer_iters.unwrap_or_default(),
                    resolved.period.unwrap_or_default(),
                    resolved.wave_lower.unwrap_or_default(),
                    resolved.sd_cap.unwrap_or_default(),
                );
            }
        }
    }
    Ok(())
}
