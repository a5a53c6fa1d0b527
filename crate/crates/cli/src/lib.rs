//! Batch runner for the pair-creation simulations.
//!
//! Every subcommand resolves a [`Plan`] from the configuration, writes the
//! configuration echo, computes, and finishes with a `manifest.json` that
//! lists each emitted file with its SHA-256.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;

pub use config::{Command, Overrides, Plan, RunConfig};
pub use output::{FileRecord, Manifest, OutputDir};

#[derive(Debug, Parser)]
#[command(name = "vacuumforge", version, about = "Electron-positron pair creation in a supercritical well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,

    /// Fill unspecified depths and interaction times with the reference values.
    #[arg(long, global = true)]
    pub paper_defaults: bool,

    /// Worker threads (all cores when absent).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    /// Persist the transition factors of time-dependent runs.
    #[arg(long, global = true)]
    pub save_matrices: bool,

    /// Stride of the two-particle density grid.
    #[arg(long, global = true, value_name = "K")]
    pub decimate: Option<usize>,

    /// Render SVG plots next to the CSV tables.
    #[arg(long, global = true)]
    pub svg: bool,
}

/// Invalid configuration, with the path of the offending field.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("{field}: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            message: message.into(),
        }
    }

    fn core(field: &str, err: vacuumforge_core::Error) -> Self {
        Self::new(field, err.to_string())
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] vacuumforge_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for a violated numerical contract, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use vacuumforge_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(E::Io(_)) | CliError::Io(_) => 1,
            CliError::Core(_) => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Reads and resolves the configuration named on the command line.
pub fn plan_from_cli(cli: &Cli) -> Result<Plan> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    let overrides = Overrides {
        decimate: cli.decimate,
        save_matrices: cli.save_matrices,
        svg: cli.svg,
    };
    Ok(Plan::resolve(&config, cli.command, cli.paper_defaults, overrides)?)
}

/// Runs `plan`, writing into `dir`.
pub fn execute(plan: &Plan, dir: &Path) -> Result<Manifest> {
    let echo = plan.echo().to_toml();
    let mut out = OutputDir::create(dir)?;
    out.write("config.toml", echo.as_bytes())?;
    match plan.command {
        Command::Spectrum => commands::spectrum::run(plan, &mut out)?,
        Command::Evolve => commands::evolve::run(plan, &mut out)?,
        Command::Observables => commands::observables::run(plan, &mut out)?,
        Command::Decay => commands::decay::run(plan, &mut out)?,
    }
    Ok(out.finish(plan.command.name(), echo)?)
}

pub fn run(cli: &Cli) -> Result<Manifest> {
    let plan = plan_from_cli(cli)?;
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(ConfigError::new("threads", "must be at least 1").into());
        }
        if rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_err() {
            log::warn!("worker pool already initialized; ignoring --threads");
        }
    }
    execute(&plan, &cli.out)
}
