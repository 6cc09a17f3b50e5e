//! Command-line front end: reads settings, runs one scenario and writes its
//! reports under the output directory.

pub mod config;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use illposed_core::experiments::{
    cascade_checks, run_burgers_gap, run_cascade_orders, run_euler_gap, run_lemma_suite, run_time_discontinuity,
    scenario_datum, Check, GapReport, Scenario, ScenarioConfig,
};
use illposed_core::field_io::{self, FieldFileError};
use illposed_core::littlewood_paley::max_resolved_shell;
use illposed_core::{besov_norm, BesovIndex};

use crate::config::{ConfigError, ConfigFile};

pub const OUTPUT_DIR_ENV: &str = "ILLPOSED_OUTPUT_DIR";
const DEFAULT_OUTPUT_DIR: &str = "illposed-output";

#[derive(Debug, Parser)]
#[command(name = "illposed", version, about = "Norm-gap experiments for Burgers and 2D Euler in Besov spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Configuration file with `key = value` lines and `[section]` headers.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Override a setting, as `key=value` or `section.key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Report directory; falls back to the config, then to $ILLPOSED_OUTPUT_DIR.
    #[arg(long, global = true, value_name = "DIR")]
    pub output_dir: Option<PathBuf>,

    /// Worker threads for the scenario cells.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Littlewood-Paley, construction and commutator checks.
    Lemmas(ScenarioArgs),
    /// Fitted orders of the 1D approximant chain.
    Cascade(ScenarioArgs),
    /// Norm gap of the Burgers solution map.
    BurgersGap(ScenarioArgs),
    /// Norm gap of the 2D Euler solution map.
    EulerGap(ScenarioArgs),
    /// Distance of the Euler solution from its datum at small times.
    TimeZero(ScenarioArgs),
    /// Besov norm of a field file.
    Norm(NormArgs),
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Shells, as `a..b`, `a,b,c` or a single value.
    #[arg(long, value_name = "RANGE")]
    pub n: Option<String>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Also write the datum (or its vorticity in 2D) as field binary and CSV.
    #[arg(long)]
    pub save_data: bool,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long)]
    pub s: f64,
    #[arg(long)]
    pub p: f64,
    /// Last shell of the sum; defaults to the finest resolved shell.
    #[arg(long)]
    pub j_max: Option<i32>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Numerics(#[from] illposed_core::Error),

    #[error(transparent)]
    FieldFile(#[from] FieldFileError),

    #[error("cannot write {path}: {message}")]
    Output { path: String, message: String },

    #[error("cannot start the worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    /// 2 for bad settings, 1 for anything that goes wrong afterwards.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Output { path: path.display().to_string(), message: e.to_string() }
}

impl Command {
    fn section(&self) -> Option<(&'static str, Scenario, &ScenarioArgs)> {
        match self {
            Command::Lemmas(a) => Some(("lemmas", Scenario::LemmaSuite, a)),
            Command::Cascade(a) => Some(("cascade", Scenario::CascadeOrders, a)),
            Command::BurgersGap(a) => Some(("burgers-gap", Scenario::BurgersGap, a)),
            Command::EulerGap(a) => Some(("euler-gap", Scenario::EulerGap, a)),
            Command::TimeZero(a) => Some(("time-zero", Scenario::TimeDiscontinuity, a)),
            Command::Norm(_) => None,
        }
    }
}

/// Settings for one scenario run after all layers are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub section: &'static str,
    pub scenario: ScenarioConfig,
    pub output_dir: PathBuf,
    pub jobs: Option<usize>,
    pub save_data: bool,
}

/// Defaults, then the config file, then `--set`, then explicit flags.
pub fn resolve(cli: &Cli, env_output_dir: Option<PathBuf>) -> Result<Option<Resolved>, CliError> {
    let Some((section, scenario, args)) = cli.command.section() else {
        return Ok(None);
    };
    let mut file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    for o in &cli.overrides {
        file.push_override(o, section)?;
    }
    let mut cfg = file.scenario(scenario, section)?;
    if let Some(n) = &args.n {
        cfg.n_list = config::parse_shells(n).map_err(|e| CliError::Usage(format!("--n {n}: {e}")))?;
    }
    if args.s.is_some() || args.p.is_some() {
        cfg.index = BesovIndex::new(args.s.unwrap_or(cfg.index.s), args.p.unwrap_or(cfg.index.p))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let jobs = match cli.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => Some(j),
        None => file.jobs()?,
    };
    let output_dir = cli
        .output_dir
        .clone()
        .or_else(|| file.output_dir())
        .or(env_output_dir)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    Ok(Some(Resolved { section, scenario: cfg, output_dir, jobs, save_data: args.save_data }))
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        println!("  {c}");
    }
}

fn summarize_gap(r: &GapReport) {
    println!("{} on {}", r.scenario, r.grid);
    for row in &r.rows {
        println!(
            "  n = {:2}  block_gap {:.6e}  besov_gap {:.6e}  ap4_gap {:.6e}  budget {:.6e}",
            row.n, row.block_gap, row.besov_gap, row.ap4_gap, row.cascade_budget
        );
    }
    for f in &r.failures {
        println!("  n = {:2}  failed: {}", f.n, f.error);
    }
}

fn write_gap(r: &GapReport, dir: &Path, stem: &str) -> Result<Vec<Check>, CliError> {
    let csv = dir.join(format!("{stem}.csv"));
    report::write_gap_csv(r, &csv).map_err(|e| output_error(&csv, e))?;
    let dat = dir.join(format!("{stem}.dat"));
    report::write_gap_dat(r, &dat).map_err(|e| output_error(&dat, e))?;
    Ok(r.checks())
}

/// Runs a scenario and writes its reports; returns whether every check passed.
pub fn run_scenario(settings: &Resolved) -> Result<bool, CliError> {
    let dir = &settings.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| output_error(dir, e))?;
    let cfg = &settings.scenario;
    let stem = settings.section;
    let start = Instant::now();
    let checks = match cfg.scenario {
        Scenario::LemmaSuite => {
            let r = run_lemma_suite(cfg)?;
            let path = dir.join("lemmas.csv");
            report::write_lemma_csv(&r, &path).map_err(|e| output_error(&path, e))?;
            r.checks
        }
        Scenario::CascadeOrders => {
            let tables = run_cascade_orders(cfg)?;
            let checks: Vec<Check> = tables.iter().flat_map(cascade_checks).collect();
            let csv = dir.join("cascade.csv");
            report::write_cascade_csv(&tables, &checks, &csv).map_err(|e| output_error(&csv, e))?;
            let dat = dir.join("cascade.dat");
            report::write_cascade_dat(&tables, &dat).map_err(|e| output_error(&dat, e))?;
            checks
        }
        Scenario::BurgersGap => {
            let r = run_burgers_gap(cfg)?;
            summarize_gap(&r);
            write_gap(&r, dir, stem)?
        }
        Scenario::EulerGap => {
            let r = run_euler_gap(cfg)?;
            summarize_gap(&r);
            write_gap(&r, dir, stem)?
        }
        Scenario::TimeDiscontinuity => {
            let r = run_time_discontinuity(cfg)?;
            summarize_gap(&r);
            write_gap(&r, dir, stem)?
        }
    };
    if settings.save_data && cfg.scenario != Scenario::LemmaSuite {
        let datum = scenario_datum(cfg)?;
        let name = if cfg.scenario.dim() == 1 { "u0" } else { "vorticity" };
        field_io::save_binary(&datum, dir.join(format!("{stem}-{name}.bin")))?;
        field_io::save_csv(&datum, dir.join(format!("{stem}-{name}.csv")))?;
    }
    print_checks(&checks);
    let passed = checks.iter().all(Check::passed);
    println!(
        "{stem}: {} in {:.1} s, reports in {}",
        if passed { "pass" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        dir.display()
    );
    Ok(passed)
}

pub fn run_norm(args: &NormArgs) -> Result<f64, CliError> {
    let idx = BesovIndex::new(args.s, args.p).map_err(|e| CliError::Usage(e.to_string()))?;
    let field = field_io::load_binary(&args.input)?;
    let j_max = args.j_max.unwrap_or_else(|| max_resolved_shell(field.grid()));
    Ok(besov_norm(&field, idx, j_max)?)
}

/// Full command dispatch; `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Command::Norm(args) = &cli.command {
        println!("{:.15e}", run_norm(args)?);
        return Ok(true);
    }
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let settings = resolve(cli, env_dir)?.expect("scenario command");
    match settings.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new().num_threads(j).build()?.install(|| run_scenario(&settings)),
        None => run_scenario(&settings),
    }
}
