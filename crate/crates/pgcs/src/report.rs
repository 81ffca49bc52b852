//! Experiment harness: runs method x benchmark x seed matrices and emits
//! machine-readable reports.
//!
//! An [`ExperimentConfig`] names an objective, a start point, the methods to
//! run, and optional overrides for every tunable; [`run_experiment`]
//! resolves the defaults, executes each (method, seed) pair, and returns an
//! [`ExperimentReport`] whose `config_echo` is the fully resolved
//! configuration — feeding it back in replays the runs exactly. Reports
//! serialize to JSON (schema below) or CSV with a fixed header.
//!
//! ```text
//! { "schema_version": 1, "config_echo": { ... }, "rows": [ ... ] }
//! ```
//!
//! The wave's upper bound may be infinite; JSON has no infinity literal, so
//! that one value serializes as the string `"inf"`.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcs::{run_gcs, GcsConfig};
use crate::hybrid::{run_pgcs, HybridConfig};
use crate::objectives::{make_objective, ObjectiveSpec};
use crate::powell::{powell_minimize, PowellConfig};
use crate::wave::{WaveParams, DEFAULT_PERIOD, DEFAULT_SD_CAP};

/// Version of the JSON report schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Default seed batch for the stochastic methods.
pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

/// The three optimization methods the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Powell,
    Gcs,
    Pgcs,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Powell => "powell",
            Method::Gcs => "gcs",
            Method::Pgcs => "pgcs",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "powell" => Ok(Method::Powell),
            "gcs" => Ok(Method::Gcs),
            "pgcs" => Ok(Method::Pgcs),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected powell, gcs, or pgcs)"
            ))),
        }
    }
}

/// Wave ceiling that may be infinite: serializes as a JSON number, or the
/// string `"inf"` when infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveUpper(pub f64);

impl Serialize for WaveUpper {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for WaveUpper {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = WaveUpper;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<WaveUpper, E> {
                Ok(WaveUpper(v))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<WaveUpper, E> {
                Ok(WaveUpper(v as f64))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<WaveUpper, E> {
                Ok(WaveUpper(v as f64))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<WaveUpper, E> {
                match v.to_ascii_lowercase().as_str() {
                    "inf" | "+inf" | "infinity" => Ok(WaveUpper(f64::INFINITY)),
                    _ => v
                        .parse::<f64>()
                        .map(WaveUpper)
                        .map_err(|_| E::custom(format!("not a wave bound: `{v}`"))),
                }
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

/// One experiment: objective, start, methods, seeds, and overrides.
///
/// Every `Option` falls back to the owning module's default during
/// [`ExperimentConfig::resolve`]; a resolved configuration has every field
/// populated and is its own replay recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Objective name: `f1`, `f2`, or `f3`.
    pub function: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    pub methods: Vec<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_outer_iters: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wave_upper: Option<WaveUpper>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sd_cap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ftol: Option<f64>,
}

impl ExperimentConfig {
    /// A bare configuration for `function` with everything defaulted.
    pub fn for_function(function: &str) -> Self {
        ExperimentConfig {
            function: function.to_string(),
            dimension: None,
            start: None,
            methods: vec![Method::Pgcs, Method::Gcs, Method::Powell],
            seeds: None,
            target: None,
            max_outer_iters: None,
            wave_lower: None,
            wave_upper: None,
            period: None,
            sd_cap: None,
            xtol: None,
            ftol: None,
        }
    }

    /// Fills every default, sorts the seed batch, and validates the result.
    ///
    /// Default starts place each method in the landscape's published trap
    /// basin: 1200 for `f1`, (600, 600) for `f2`, and all-200 for `f3`.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let default_dimension = match self.function.as_str() {
            "f1" => 1,
            "f2" => 2,
            _ => 12,
        };
        let dimension = self.dimension.unwrap_or(default_dimension);
        // Validates the function name and the dimension together.
        make_objective(&self.function, dimension)?;

        let start = match &self.start {
            Some(s) => s.clone(),
            None => match self.function.as_str() {
                "f1" => vec![1200.0],
                "f2" => vec![600.0, 600.0],
                _ => vec![200.0; dimension],
            },
        };
        if start.len() != dimension {
            return Err(Error::Config(format!(
                "start point has {} coordinates, dimension is {dimension}",
                start.len()
            )));
        }
        if start.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("start point must be finite".into()));
        }

        if self.methods.is_empty() {
            return Err(Error::Config("at least one method is required".into()));
        }
        let mut seeds = self.seeds.clone().unwrap_or_else(|| DEFAULT_SEEDS.to_vec());
        seeds.sort_unstable();
        seeds.dedup();
        let stochastic = self
            .methods
            .iter()
            .any(|m| matches!(m, Method::Gcs | Method::Pgcs));
        if stochastic && seeds.is_empty() {
            return Err(Error::Config(
                "stochastic methods need a nonempty seed batch".into(),
            ));
        }

        let resolved = ExperimentConfig {
            function: self.function.clone(),
            dimension: Some(dimension),
            start: Some(start),
            methods: self.methods.clone(),
            seeds: Some(seeds),
            target: Some(self.target.unwrap_or(0.05)),
            max_outer_iters: Some(self.max_outer_iters.unwrap_or(500_000)),
            wave_lower: Some(self.wave_lower.unwrap_or(0.0)),
            wave_upper: Some(self.wave_upper.unwrap_or(WaveUpper(f64::INFINITY))),
            period: Some(self.period.unwrap_or(DEFAULT_PERIOD)),
            sd_cap: Some(self.sd_cap.unwrap_or(DEFAULT_SD_CAP)),
            xtol: Some(self.xtol.unwrap_or(1e-4)),
            ftol: Some(self.ftol.unwrap_or(1e-4)),
        };
        // Surface invalid overrides now, before any run starts.
        resolved.wave_params()?;
        resolved.powell_config().validate()?;
        resolved.gcs_config(0)?.validate()?;
        Ok(resolved)
    }

    /// Objective described by a resolved configuration.
    pub fn objective(&self) -> Result<ObjectiveSpec> {
        make_objective(&self.function, self.dimension.expect("resolved config"))
    }

    fn wave_params(&self) -> Result<WaveParams> {
        WaveParams::new(
            self.wave_lower.expect("resolved config"),
            self.wave_upper.expect("resolved config").0,
            self.period.expect("resolved config"),
            self.sd_cap.expect("resolved config"),
        )
    }

    fn gcs_config(&self, seed: u64) -> Result<GcsConfig> {
        Ok(GcsConfig {
            target: self.target.expect("resolved config"),
            max_outer_iters: self.max_outer_iters.expect("resolved config"),
            wave: self.wave_params()?,
            seed,
        })
    }

    fn powell_config(&self) -> PowellConfig {
        PowellConfig {
            xtol: self.xtol.expect("resolved config"),
            ftol: self.ftol.expect("resolved config"),
            max_iters: None,
            max_evals: None,
        }
    }
}

/// One (method, seed) run, flattened for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub method: Method,
    pub function: String,
    pub dimension: usize,
    /// `None` for the deterministic Powell rows.
    pub seed: Option<u64>,
    pub position: Vec<f64>,
    pub final_value: f64,
    pub outer_iters: u64,
    pub evals: u64,
    pub refinements: u64,
    pub wall_time_s: f64,
    pub reason: String,
}

/// A full experiment: schema version, replayable configuration, rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    #[serde(rename = "config_echo")]
    pub config: ExperimentConfig,
    pub rows: Vec<ReportRow>,
}

/// Executes every (method, seed) pair of `config`, methods in the given
/// order, seeds ascending. Powell, being deterministic, runs once per
/// experiment regardless of the seed batch.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let resolved = config.resolve()?;
    let objective = resolved.objective()?;
    let start = resolved.start.clone().expect("resolved config");
    let seeds = resolved.seeds.clone().expect("resolved config");

    let mut rows = Vec::new();
    for &method in &resolved.methods {
        match method {
            Method::Powell => {
                let clock = Instant::now();
                let outcome =
                    powell_minimize(|x: &[f64]| objective.eval(x), &start, &resolved.powell_config())?;
                rows.push(ReportRow {
                    method,
                    function: resolved.function.clone(),
                    dimension: objective.dimension(),
                    seed: None,
                    position: outcome.x,
                    final_value: outcome.f,
                    outer_iters: outcome.iters,
                    evals: outcome.evals,
                    refinements: 0,
                    wall_time_s: clock.elapsed().as_secs_f64(),
                    reason: outcome.reason.to_string(),
                });
            }
            Method::Gcs | Method::Pgcs => {
                for &seed in &seeds {
                    let gcs = resolved.gcs_config(seed)?;
                    let result = if method == Method::Pgcs {
                        let hybrid = HybridConfig {
                            gcs,
                            powell: resolved.powell_config(),
                        };
                        run_pgcs(&objective, &start, &hybrid)?
                    } else {
                        run_gcs(&objective, &start, &gcs, None)?
                    };
                    rows.push(ReportRow {
                        method,
                        function: resolved.function.clone(),
                        dimension: objective.dimension(),
                        seed: Some(seed),
                        position: result.final_pos,
                        final_value: result.final_val,
                        outer_iters: result.outer_iters,
                        evals: result.evals,
                        refinements: result.refinements,
                        wall_time_s: result.wall_time,
                        reason: result.reason.to_string(),
                    });
                }
            }
        }
    }

    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        config: resolved,
        rows,
    })
}

/// Report serialization formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown report format `{other}` (expected json or csv)"
            ))),
        }
    }
}

/// Fixed CSV header; the columns are the [`ReportRow`] fields.
pub const CSV_HEADER: &str =
    "method,function,dimension,seed,position,final_value,outer_iters,evals,refinements,wall_time_s,reason";

/// 17 significant digits: round-trips any f64 exactly.
fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_line(row: &ReportRow) -> String {
    let position = row
        .position
        .iter()
        .map(|&v| csv_float(v))
        .collect::<Vec<_>>()
        .join(";");
    format!(
        "{},{},{},{},{},{},{},{},{},{},{}",
        row.method,
        row.function,
        row.dimension,
        row.seed.map(|s| s.to_string()).unwrap_or_default(),
        position,
        csv_float(row.final_value),
        row.outer_iters,
        row.evals,
        row.refinements,
        csv_float(row.wall_time_s),
        row.reason
    )
}

/// Renders a report to a string in the requested format.
pub fn render_report(report: &ExperimentReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(report)?;
            text.push('\n');
            Ok(text)
        }
        ReportFormat::Csv => {
            let mut text = String::from(CSV_HEADER);
            text.push('\n');
            for row in &report.rows {
                text.push_str(&csv_line(row));
                text.push('\n');
            }
            Ok(text)
        }
    }
}

/// Writes a report to `destination`, or standard output when `None`.
pub fn emit_report(
    report: &ExperimentReport,
    format: ReportFormat,
    destination: Option<&Path>,
) -> Result<()> {
    if report.rows.is_empty() {
        return Err(Error::Config("report has no rows to emit".into()));
    }
    let rendered = render_report(report, format)?;
    match destination {
        Some(path) => std::fs::write(path, rendered).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(rendered.as_bytes()).map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            })
        }
    }
}

/// Reads an [`ExperimentConfig`] from a JSON file.
pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Names of the built-in benchmark presets.
pub const PRESET_NAMES: [&str; 3] = ["bench1", "bench2", "bench3"];

/// A named benchmark preset with the reference constants: target 0.05,
/// 500000 proposals, period 5000, wave floor 0 with an infinite ceiling,
/// and the trap-basin start point for its objective.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let function = match name {
        "bench1" => "f1",
        "bench2" => "f2",
        "bench3" => "f3",
        other => {
            return Err(Error::Config(format!(
                "unknown preset `{other}` (expected bench1, bench2, or bench3)"
            )))
        }
    };
    Ok(ExperimentConfig::for_function(function))
}

fn fmt_compact(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() >= 1e-3 && v.abs() < 1e5 {
        format!("{v:.4}")
    } else {
        format!("{v:.3e}")
    }
}

fn fmt_optimum(row: &ReportRow) -> String {
    let mut parts: Vec<String> = row.position.iter().map(|&v| fmt_compact(v)).collect();
    parts.push(fmt_compact(row.final_value));
    format!("[{}]", parts.join(", "))
}

/// Picks the row with the median final value among a method's rows (the
/// single row itself for deterministic methods).
fn median_row<'a>(rows: &[&'a ReportRow]) -> &'a ReportRow {
    let mut sorted: Vec<&ReportRow> = rows.to_vec();
    sorted.sort_by(|a, b| a.final_value.total_cmp(&b.final_value));
    sorted[sorted.len() / 2]
}

/// Formats one comparison table per report: per method, the median-seed
/// optimum as `[position..., objective]`, with per-row wall time.
pub fn format_tables(reports: &[(String, ExperimentReport)]) -> String {
    let mut out = String::new();
    for (preset_name, report) in reports {
        let config = &report.config;
        out.push_str(&format!(
            "== {preset_name}: {} (d={}), start {:?}, target {} ==\n",
            config.function,
            config.dimension.unwrap_or_default(),
            config.start.as_deref().unwrap_or_default(),
            config.target.unwrap_or_default(),
        ));
        out.push_str(&format!(
            "{:<8} {:<56} {:>10}  {}\n",
            "method", "optimum [position..., objective]", "wall (s)", "detail"
        ));
        for &method in &config.methods {
            let rows: Vec<&ReportRow> =
                report.rows.iter().filter(|r| r.method == method).collect();
            if rows.is_empty() {
                continue;
            }
            let shown = median_row(&rows);
            let detail = match shown.seed {
                Some(seed) => format!("{} (seed {seed}, median of {})", shown.reason, rows.len()),
                None => shown.reason.clone(),
            };
            out.push_str(&format!(
                "{:<8} {:<56} {:>10.3}  {}\n",
                method.to_string(),
                fmt_optimum(shown),
                shown.wall_time_s,
                detail
            ));
        }
        out.push('\n');
    }
    out
}

/// Runs the given experiments and renders their comparison tables.
pub fn tables_for(configs: Vec<(String, ExperimentConfig)>) -> Result<(Vec<(String, ExperimentReport)>, String)> {
    let mut reports = Vec::new();
    for (name, config) in configs {
        reports.push((name, run_experiment(&config)?));
    }
    let rendered = format_tables(&reports);
    Ok((reports, rendered))
}

/// Reproduces the three benchmark comparison tables with all three methods
/// and the default seed batch, prints them, and writes the JSON report to
/// `output` (default `benchmark_tables.json`).
pub fn benchmark_tables(output: Option<&Path>) -> Result<Vec<(String, ExperimentReport)>> {
    let configs = PRESET_NAMES
        .iter()
        .map(|name| Ok((name.to_string(), preset(name)?)))
        .collect::<Result<Vec<_>>>()?;
    let (reports, rendered) = tables_for(configs)?;
    print!("{rendered}");

    let path = output.unwrap_or_else(|| Path::new("benchmark_tables.json"));
    let payload = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "tables": reports
            .iter()
            .map(|(name, report)| serde_json::json!({ "preset": name, "report": report }))
            .collect::<Vec<_>>(),
    });
    let mut text = serde_json::to_string_pretty(&payload)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config(function: &str) -> ExperimentConfig {
        let mut config = ExperimentConfig::for_function(function);
        config.max_outer_iters = Some(200);
        config.period = Some(50);
        config.wave_upper = Some(WaveUpper(10.0));
        config.seeds = Some(vec![5, 1, 3, 2, 4]);
        config
    }

    #[test]
    fn preset_fidelity() {
        let resolved = preset("bench3").unwrap().resolve().unwrap();
        assert_eq!(resolved.function, "f3");
        assert_eq!(resolved.dimension, Some(12));
        assert_eq!(resolved.start, Some(vec![200.0; 12]));
        assert_eq!(resolved.target, Some(0.05));
        assert_eq!(resolved.max_outer_iters, Some(500_000));
        assert_eq!(resolved.period, Some(5000));
        assert_eq!(resolved.wave_lower, Some(0.0));
        assert_eq!(resolved.wave_upper, Some(WaveUpper(f64::INFINITY)));
        assert_eq!(resolved.sd_cap, Some(1e30));
        assert_eq!(resolved.seeds, Some(DEFAULT_SEEDS.to_vec()));

        let b1 = preset("bench1").unwrap().resolve().unwrap();
        assert_eq!(b1.start, Some(vec![1200.0]));
        let b2 = preset("bench2").unwrap().resolve().unwrap();
        assert_eq!(b2.start, Some(vec![600.0, 600.0]));
        assert!(preset("bench4").is_err());
    }

    #[test]
    fn row_counting_and_order() {
        let report = run_experiment(&quick_config("f3")).unwrap();
        // 5 pgcs + 5 gcs + 1 powell, methods in config order, seeds sorted.
        assert_eq!(report.rows.len(), 11);
        let methods: Vec<Method> = report.rows.iter().map(|r| r.method).collect();
        assert_eq!(
            methods,
            [
                vec![Method::Pgcs; 5],
                vec![Method::Gcs; 5],
                vec![Method::Powell]
            ]
            .concat()
        );
        let seeds: Vec<Option<u64>> = report.rows[..5].iter().map(|r| r.seed).collect();
        assert_eq!(seeds, (1..=5).map(Some).collect::<Vec<_>>());
        assert_eq!(report.rows[10].seed, None);
    }

    #[test]
    fn invalid_configs_fail_before_running() {
        let mut config = quick_config("f2");
        config.dimension = Some(3);
        assert!(matches!(run_experiment(&config), Err(Error::Config(_))));

        let mut config = quick_config("f9");
        config.function = "f9".into();
        assert!(matches!(
            run_experiment(&config),
            Err(Error::UnknownObjective(_))
        ));

        let mut config = quick_config("f2");
        config.start = Some(vec![1.0]);
        assert!(matches!(run_experiment(&config), Err(Error::Config(_))));

        let mut config = quick_config("f2");
        config.seeds = Some(vec![]);
        assert!(matches!(run_experiment(&config), Err(Error::Config(_))));

        let mut config = quick_config("f2");
        config.period = Some(1);
        assert!(matches!(run_experiment(&config), Err(Error::Config(_))));
    }

    #[test]
    fn json_report_round_trips() {
        let report = run_experiment(&quick_config("f2")).unwrap();
        let text = render_report(&report, ReportFormat::Json).unwrap();
        let parsed: ExperimentReport = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.schema_version, SCHEMA_VERSION);
        assert_eq!(parsed.config, report.config);
        assert_eq!(parsed.rows, report.rows);
    }

    #[test]
    fn infinite_wave_bound_survives_json() {
        let resolved = preset("bench1").unwrap().resolve().unwrap();
        let text = serde_json::to_string(&resolved).unwrap();
        assert!(text.contains("\"wave_upper\":\"inf\""));
        let parsed: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.wave_upper, Some(WaveUpper(f64::INFINITY)));
    }

    #[test]
    fn csv_has_fixed_header_and_roundtrip_floats() {
        let report = run_experiment(&quick_config("f2")).unwrap();
        let text = render_report(&report, ReportFormat::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), report.rows.len() + 1);
        assert_eq!(lines[0], CSV_HEADER);
        for (line, row) in lines[1..].iter().zip(&report.rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields.len(), 11);
            let value: f64 = fields[5].parse().unwrap();
            assert_eq!(value, row.final_value, "final_value does not round-trip");
            let coords: Vec<f64> = fields[4]
                .split(';')
                .map(|v| v.parse().unwrap())
                .collect();
            assert_eq!(coords, row.position, "position does not round-trip");
        }
    }

    #[test]
    fn replaying_the_echo_is_deterministic() {
        let first = run_experiment(&quick_config("f3")).unwrap();
        let replay = run_experiment(&first.config).unwrap();
        assert_eq!(first.rows.len(), replay.rows.len());
        for (a, b) in first.rows.iter().zip(&replay.rows) {
            assert_eq!(a.position, b.position);
            assert_eq!(a.final_value, b.final_value);
            assert_eq!(a.outer_iters, b.outer_iters);
            assert_eq!(a.evals, b.evals);
            assert_eq!(a.refinements, b.refinements);
            assert_eq!(a.reason, b.reason);
            assert_eq!(a.seed, b.seed);
        }
    }

    #[test]
    fn powell_row_on_bench1_matches_the_trap() {
        let mut config = preset("bench1").unwrap();
        config.methods = vec![Method::Powell];
        let report = run_experiment(&config).unwrap();
        assert_eq!(report.rows.len(), 1);
        let row = &report.rows[0];
        assert!((row.final_value - 399.53).abs() < 1.0, "f = {}", row.final_value);
        assert!((row.position[0] - 1198.58).abs() < 2.0);
    }

    #[test]
    fn tables_render_one_line_per_method() {
        let (reports, rendered) =
            tables_for(vec![("quick".into(), quick_config("f2"))]).unwrap();
        assert_eq!(reports.len(), 1);
        assert!(rendered.contains("quick: f2"));
        for method in ["pgcs", "gcs", "powell"] {
            assert!(rendered.contains(method), "missing {method} row");
        }
    }

    #[test]
    fn emit_rejects_empty_reports() {
        let mut report = run_experiment(&quick_config("f2")).unwrap();
        report.rows.clear();
        assert!(matches!(
            emit_report(&report, ReportFormat::Json, None),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn emit_reports_unwritable_path() {
        let report = run_experiment(&quick_config("f2")).unwrap();
        let bad = Path::new("/nonexistent-dir-for-sure/report.json");
        let err = emit_report(&report, ReportFormat::Json, Some(bad)).unwrap_err();
        match err {
            Error::Io { path, .. } => assert_eq!(path, bad),
            other => panic!("expected Io error, got {other:?}"),
        }
    }
}
