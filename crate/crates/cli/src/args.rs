use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gtm_core::direct::StopRule;
use gtm_core::problems::ProblemKind;

use crate::bench::Sweep;

fn parse_stop(s: &str) -> Result<StopRule, String> {
    match s {
        "whole-solve" => Ok(StopRule::WholeSolve),
        "retire-interval" => Ok(StopRule::RetireInterval),
        _ => Err(format!("unknown stop rule '{s}' (expected whole-solve or retire-interval)")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "gtm", version, about = "Globally optimal truncated-loss estimation: simulate, solve, benchmark")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded instance as CSV plus a ground-truth JSON sidecar.
    Simulate(SimulateArgs),
    /// Solve an instance CSV and write a JSON report.
    Solve(SolveArgs),
    /// Sweep outlier ratio or threshold over seeded trials and write CSV rows.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub problem: ProblemKind,
    /// Number of data (default depends on the problem).
    #[arg(long)]
    pub m: Option<usize>,
    /// Unknowns for linreg.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub outlier_ratio: Option<f64>,
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Instance CSV; the sidecar goes to the same stem with `.truth.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub xi: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    #[arg(long, default_value = "gtm")]
    pub solver: String,
    #[arg(long)]
    pub max_nodes: Option<usize>,
    /// When the inner DIRECT stops: `whole-solve` ends the call at the first
    /// sub-resolution interval, `retire-interval` only retires that interval.
    #[arg(long, value_parser = parse_stop, default_value = "whole-solve")]
    pub direct_stop: StopRule,
    /// Registration only: fit the rotation on the best-fitting subset.
    #[arg(long)]
    pub refine: bool,
    #[arg(long, default_value_t = 0.02)]
    pub subset_fraction: f64,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub sweep: Sweep,
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub solvers: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long)]
    pub noise: Option<f64>,
    /// Fixed threshold for an outlier sweep.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Fixed outlier ratio for a threshold sweep.
    #[arg(long)]
    pub outlier_ratio: Option<f64>,
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon: f64,
    #[arg(long)]
    pub max_nodes: Option<usize>,
    /// When the inner DIRECT stops: `whole-solve` ends the call at the first
    /// sub-resolution interval, `retire-interval` only retires that interval.
    #[arg(long, value_parser = parse_stop, default_value = "whole-solve")]
    pub direct_stop: StopRule,
    #[arg(long)]
    pub refine: bool,
    #[arg(long, default_value_t = 0.02)]
    pub subset_fraction: f64,
    /// CSV path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
