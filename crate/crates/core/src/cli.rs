//! Command-line front end.
//!
//! Exit codes: 0 success, 1 selfcheck failure, 2 usage or config error,
//! 3 IO error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::monotones::required_settings;
use crate::scenarios::{
    builtin, fit_amplitude, run_scenario, AmplitudeFit, EvolutionMode, FitModel, ScenarioConfig, ScenarioDoc,
    TimeSeries,
};
use crate::selfcheck::{self, Fault};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SERIES_HEADER: [&str; 9] = [
    "scenario", "t_index", "t", "setting", "ideal", "noisy", "sampled", "stderr", "shots",
];
pub const MONOTONE_HEADER: [&str; 6] = [
    "scenario",
    "t_index",
    "t",
    "monotone_ideal",
    "monotone_noisy",
    "monotone_sampled",
];

#[derive(Debug, Parser)]
#[command(name = "eqsim", version, about = "Embedding quantum simulator for entanglement monotones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a built-in or user-defined scenario and write its time series.
    Run(RunArgs),
    /// Print the measurement settings needed for an N-qubit system.
    Settings {
        /// Number of system qubits (at least 2).
        n_system: usize,
    },
    /// Run the randomized oracle-equivalence suites.
    Selfcheck {
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    ImSign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

#[derive(Clone, Debug, clap::Args)]
pub struct RunArgs {
    /// `builtin:concurrence`, `builtin:tangle`, a config JSON file, or a
    /// manifest.json from an earlier run.
    #[arg(long)]
    pub scenario: String,
    /// Directory for series.csv, monotone.csv, series.json, fit.json and manifest.json.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    pub format: OutputFormat,
    #[command(flatten)]
    pub overrides: Overrides,
}

/// Flags that take precedence over the config file.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// Shots per setting and time point; omit for ideal expectations only.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Visibility in [0, 1].
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// `embedded` or `direct`.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Selfcheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Selfcheck(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Selfcheck(m) => write!(f, "selfcheck failed: {m}"),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config: ScenarioConfig,
    pub started_at: String,
    pub output_paths: Vec<PathBuf>,
}

/// Resolve `--scenario` into an unvalidated config document.
pub fn load_scenario_doc(source: &str) -> Result<ScenarioDoc, CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        return builtin(name)
            .map(ScenarioDoc::from)
            .ok_or_else(|| CliError::Usage(format!("unknown built-in scenario {name:?} (try concurrence or tangle)")));
    }
    let path = Path::new(source);
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    // a manifest carries the full config of an earlier run
    let doc_value = match value.get("config") {
        Some(cfg) if value.get("tool_version").is_some() => cfg.clone(),
        _ => value,
    };
    serde_json::from_value(doc_value).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn apply_overrides(doc: &mut ScenarioDoc, o: &Overrides) -> Result<(), CliError> {
    if let Some(shots) = o.shots {
        doc.shots = Some(shots);
    }
    if let Some(alpha) = o.alpha {
        doc.alpha = alpha;
    }
    if let Some(seed) = o.seed {
        doc.seed = seed;
    }
    if let Some(steps) = o.steps {
        doc.steps = steps;
    }
    if let Some(dt) = o.dt {
        doc.dt = dt;
    }
    if let Some(mode) = &o.mode {
        doc.evolution_mode = mode
            .parse::<EvolutionMode>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn series_csv(series: &TimeSeries) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SERIES_HEADER)?;
    let name = &series.config.name;
    for p in &series.points {
        for r in &p.records {
            w.write_record([
                name.clone(),
                p.t_index.to_string(),
                fmt_f64(r.t),
                r.setting.to_string(),
                fmt_f64(r.ideal),
                fmt_f64(r.noisy),
                fmt_opt(r.sampled),
                fmt_opt(r.stderr),
                r.shots.map(|s| s.to_string()).unwrap_or_default(),
            ])?;
        }
    }
    Ok(w.into_inner().expect("in-memory writer"))
}

pub fn monotone_csv(series: &TimeSeries) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(MONOTONE_HEADER)?;
    for p in &series.points {
        w.write_record([
            series.config.name.clone(),
            p.t_index.to_string(),
            fmt_f64(p.t),
            fmt_f64(p.monotone_ideal),
            fmt_f64(p.monotone_noisy),
            fmt_opt(p.monotone_sampled),
        ])?;
    }
    Ok(w.into_inner().expect("in-memory writer"))
}

/// Write via a temporary file in the same directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("serializable");
    out.push(b'\n');
    out
}

pub fn cmd_run(args: &RunArgs) -> Result<(TimeSeries, Option<AmplitudeFit>), CliError> {
    let started_at = chrono::Utc::now().to_rfc3339();
    let mut doc = load_scenario_doc(&args.scenario)?;
    apply_overrides(&mut doc, &args.overrides)?;
    let config = ScenarioConfig::try_from(doc).map_err(|e| CliError::Usage(e.to_string()))?;
    let series = run_scenario(&config).map_err(|e| CliError::Usage(e.to_string()))?;
    let fit = fit_amplitude(&series, FitModel::for_parity(config.parity())).ok();

    fs::create_dir_all(&args.output).map_err(|e| io_err(&args.output, e))?;
    let mut outputs: Vec<(PathBuf, Vec<u8>)> = Vec::new();
    let csv_err = |e: csv::Error| CliError::Io(e.to_string());
    if matches!(args.format, OutputFormat::Csv | OutputFormat::Both) {
        outputs.push((args.output.join("series.csv"), series_csv(&series).map_err(csv_err)?));
        outputs.push((args.output.join("monotone.csv"), monotone_csv(&series).map_err(csv_err)?));
    }
    if matches!(args.format, OutputFormat::Json | OutputFormat::Both) {
        outputs.push((args.output.join("series.json"), to_json(&series)));
    }
    if let Some(fit) = &fit {
        outputs.push((args.output.join("fit.json"), to_json(fit)));
    }
    let manifest_path = args.output.join("manifest.json");
    let mut output_paths: Vec<PathBuf> = outputs.iter().map(|(p, _)| p.clone()).collect();
    output_paths.push(manifest_path.clone());
    let manifest = RunManifest {
        tool_version: TOOL_VERSION.into(),
        config,
        started_at,
        output_paths,
    };
    for (path, bytes) in &outputs {
        write_atomic(path, bytes)?;
    }
    write_atomic(&manifest_path, &to_json(&manifest))?;
    Ok((series, fit))
}

pub fn cmd_settings(n_system: usize) -> Result<Vec<String>, CliError> {
    required_settings(n_system)
        .map(|v| v.iter().map(|p| p.to_string()).collect())
        .map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_selfcheck(fault: Option<Fault>) -> Result<Vec<selfcheck::SuiteReport>, CliError> {
    selfcheck::run(fault).map_err(|e| CliError::Selfcheck(e.to_string()))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let (series, fit) = cmd_run(&args)?;
            println!(
                "{}: {} points x {} settings -> {}",
                series.config.name,
                series.points.len(),
                series.points.first().map_or(0, |p| p.records.len()),
                args.output.display()
            );
            if let Some(fit) = fit {
                println!(
                    "fit ({:?}, {:?}): alpha_hat = {:.6}, rms residual = {:.3e}",
                    fit.model, fit.source, fit.alpha_hat, fit.residual
                );
            }
            Ok(())
        }
        Command::Settings { n_system } => {
            for s in cmd_settings(n_system)? {
                println!("{s}");
            }
            Ok(())
        }
        Command::Selfcheck { inject_fault } => {
            let fault = inject_fault.map(|FaultArg::ImSign| Fault::ImaginarySign);
            let reports = cmd_selfcheck(fault)?;
            let mut failed = Vec::new();
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status}  {:<40} cases={:<4} max_error={:.3e} tol={:.0e}",
                    r.name, r.cases, r.max_error, r.tolerance
                );
                if !r.passed() {
                    failed.push(r.name);
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Selfcheck(failed.join(", ")))
            }
        }
    }
}

/// Entry point; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
