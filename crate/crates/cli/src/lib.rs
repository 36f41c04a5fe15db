//! `rigidsim` command-line front end.
//!
//! Exit codes: 0 success, 1 identity failure or discrepancy above tolerance,
//! 2 bad flags or config, 3 gimbal lock or chart boundary during a run,
//! 4 I/O failure, 5 attitude not expressible in a requested chart.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rigidsim_core::charts::Chart;
use thiserror::Error;

pub mod compare;
pub mod config;
pub mod output;
pub mod simulate;
pub mod verify;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Failed(String),
    #[error("stopped at t = {time}: {message}")]
    Stopped { time: f64, message: String },
    #[error("initial attitude is not expressible in {chart}: {reason}")]
    Inexpressible { chart: Chart, reason: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Stopped { .. } => 3,
            CliError::Io { .. } => 4,
            CliError::Inexpressible { .. } => 5,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rigidsim",
    version,
    about = "Rigid-body attitude dynamics in generalized coordinates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the kinematic identities on random samples and report residuals.
    Verify(VerifyArgs),
    /// Integrate one formulation from a JSON config and write the trajectory.
    Simulate(SimulateArgs),
    /// Run the body-frame reference and several charts from one config and
    /// report their attitude and rate discrepancies.
    Compare(CompareArgs),
}

/// `all` or a single chart name.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartSelection(pub Vec<Chart>);

impl std::str::FromStr for ChartSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(ChartSelection(Chart::ALL.to_vec()));
        }
        s.parse::<Chart>()
            .map(|c| ChartSelection(vec![c]))
            .map_err(|e| e.to_string())
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t >= 0.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(format!(
            "tolerance must be a finite non-negative number, got {s}"
        ))
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Random samples per chart.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Pass threshold on the norm-scaled residuals.
    #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
    pub tol: f64,
    /// all, euler321, euler313 or quat.
    #[arg(long, default_value = "all")]
    pub chart: ChartSelection,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: output::Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Comma-separated chart names.
    #[arg(long, value_delimiter = ',', default_value = "euler321,euler313,quat")]
    pub charts: Vec<Chart>,
    /// JSON report path.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify(args) => verify::run(&args),
        Command::Simulate(args) => simulate::run(&args),
        Command::Compare(args) => compare::run(&args),
    }
}
