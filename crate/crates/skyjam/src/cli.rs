//! Batch front-end: every requested (scheme, T) cell is solved, checked,
//! evaluated by Monte-Carlo and written to the output directory.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use skyjam_core::baselines::run_scheme_with;
use skyjam_core::model::{check_schedule, check_trajectory, Discretization};
use skyjam_core::{mc_secrecy_rate, BcdConfig, ScenarioParams, SchemeId};

use crate::config::{ConfigError, ScenarioConfig};
use crate::report::{self, RateRow, TraceLine};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SKYJAM_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Jtp,
    Tnp,
    Ltp,
    Nj,
    All,
}

impl SchemeArg {
    fn expand(self) -> Vec<SchemeId> {
        match self {
            SchemeArg::Jtp => vec![SchemeId::Jtp],
            SchemeArg::Tnp => vec![SchemeId::Tnp],
            SchemeArg::Ltp => vec![SchemeId::Ltp],
            SchemeArg::Nj => vec![SchemeId::Nj],
            SchemeArg::All => SchemeId::ALL.to_vec(),
        }
    }
}

/// Joint UAV trajectory and power design for cooperative jamming.
#[derive(Debug, Parser)]
#[command(name = "skyjam", version)]
pub struct Args {
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Schemes to run; may be repeated or comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub scheme: Vec<SchemeArg>,
    /// Flight periods in seconds, comma separated. Defaults to the scenario's `T`.
    #[arg(long = "T", value_delimiter = ',')]
    pub periods: Vec<f64>,
    /// Slot length in seconds, replacing the scenario's discretization.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Stopping threshold on the fractional objective increase per sweep.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Monte-Carlo samples per slot and terminal.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub mc_samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{what}: {source}")]
    Scenario { what: String, source: skyjam_core::Error },
    #[error("{scheme} at T = {period} s: {source}")]
    Solver { scheme: SchemeId, period: f64, source: skyjam_core::Error },
    #[error("{scheme} at T = {period} s: emitted design is infeasible (worst violation {worst:e})")]
    Infeasible { scheme: SchemeId, period: f64, worst: f64 },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("invalid {THREADS_ENV}: {0:?}")]
    Threads(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// Usage-level problems exit with 2, everything else with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Threads(_) => 2,
            _ => 1,
        }
    }
}

/// Everything that determines a run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub scenario: PathBuf,
    pub schemes: Vec<SchemeId>,
    pub periods: Vec<f64>,
    pub mc_samples: u64,
    pub seed: u64,
    pub out: PathBuf,
    pub version: String,
    /// Scenario after command-line overrides, for the first period.
    pub params: ScenarioParams,
}

impl RunManifest {
    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        let mut params = ScenarioConfig::load(&args.scenario)?.to_params()?;
        if let Some(dt) = args.dt {
            params.discretization = Discretization::SlotLength(dt);
        }
        if let Some(eps) = args.epsilon {
            params.epsilon = eps;
        }
        let periods = if args.periods.is_empty() { vec![params.period] } else { args.periods.clone() };
        let mut schemes: Vec<SchemeId> = args.scheme.iter().flat_map(|s| s.expand()).collect();
        schemes.sort();
        schemes.dedup();
        // validate every period up front so a bad T fails before any file is written
        for &t in &periods {
            params
                .clone()
                .with_period(t)
                .build()
                .map_err(|source| CliError::Scenario { what: format!("scenario at T = {t} s"), source })?;
        }
        params.period = periods[0];
        Ok(RunManifest {
            scenario: args.scenario.clone(),
            schemes,
            periods,
            mc_samples: args.mc_samples,
            seed: args.seed,
            out: args.out.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            params,
        })
    }

    /// Cells in output order: schemes outer, periods inner.
    pub fn cells(&self) -> Vec<(SchemeId, f64)> {
        self.schemes.iter().flat_map(|&s| self.periods.iter().map(move |&t| (s, t))).collect()
    }
}

/// File stem shared by a cell's outputs, e.g. `jtp_T250`.
pub fn cell_stem(scheme: SchemeId, period: f64) -> String {
    format!("{scheme}_T{}", report::fmt_f64(period))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_owned(), source }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv { path: path.to_owned(), source }
}

fn run_cell(m: &RunManifest, scheme: SchemeId, period: f64) -> Result<RateRow, CliError> {
    let s = m
        .params
        .clone()
        .with_period(period)
        .build()
        .map_err(|source| CliError::Scenario { what: format!("scenario at T = {period} s"), source })?;
    let cfg = BcdConfig::for_scenario(&s);
    let start = Instant::now();
    let mut trace = Vec::new();
    let sol = run_scheme_with(&s, scheme, &cfg, |r| {
        trace.push(TraceLine { iteration: r.iteration, objective: r.objective, wall_s: start.elapsed().as_secs_f64() })
    })
    .map_err(|source| CliError::Solver { scheme, period, source })?;

    let solver = |source| CliError::Solver { scheme, period, source };
    for verdict in
        [check_trajectory(&s, &sol.trajectory).map_err(solver)?, check_schedule(&s, &sol.schedule).map_err(solver)?]
    {
        if !verdict.is_feasible() {
            return Err(CliError::Infeasible { scheme, period, worst: verdict.worst() });
        }
    }
    let mc = mc_secrecy_rate(&s, &sol.trajectory, &sol.schedule, m.mc_samples, m.seed).map_err(solver)?;
    log::info!(
        "{scheme} T = {period} s: surrogate {:.6} bps/Hz after {} sweeps, {:.2} s",
        sol.objective,
        sol.trace.len(),
        start.elapsed().as_secs_f64()
    );

    let stem = cell_stem(scheme, period);
    let path = m.out.join(format!("{stem}_trajectory.csv"));
    report::write_trajectory_csv(create(&path)?, &sol).map_err(csv_err(&path))?;
    let path = m.out.join(format!("{stem}_solution.json"));
    report::write_json(create(&path)?, &sol).map_err(io_err(&path))?;
    let path = m.out.join(format!("{stem}_mc.json"));
    report::write_json(create(&path)?, &mc).map_err(io_err(&path))?;
    let path = m.out.join(format!("{stem}_trace.jsonl"));
    report::write_trace_jsonl(create(&path)?, &trace).map_err(io_err(&path))?;

    Ok(RateRow { period, scheme, report: mc })
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Threads(v)),
        },
    }
}

/// Runs every cell of `m` and writes the outputs.
pub fn execute(m: &RunManifest) -> Result<Vec<RateRow>, CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;
    fs::create_dir_all(&m.out).map_err(io_err(&m.out))?;
    let path = m.out.join("manifest.json");
    report::write_json(create(&path)?, m).map_err(io_err(&path))?;

    let cells = m.cells();
    let rows: Vec<RateRow> =
        pool.install(|| cells.par_iter().map(|&(scheme, t)| run_cell(m, scheme, t)).collect::<Result<_, _>>())?;

    let path = m.out.join("rates.csv");
    report::write_rates_csv(create(&path)?, &rows).map_err(csv_err(&path))?;
    Ok(rows)
}

/// Parses `args` (program name first), runs and returns the process exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = thread_cap().and_then(|_| RunManifest::from_args(&args)).and_then(|m| execute(&m));
    match result {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
