use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rtkm::{Algorithm, InitMethod, SolverConfig, WeightInit};

use crate::dataset::{DatasetArgs, Preset};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "rtkm", version, about = "Robust trimmed k-means experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one algorithm with restarts and keep the best objective.
    Fit(FitArgs),
    /// Run restarts over a grid of outlier fractions and tabulate F1 and M_e.
    Sweep(SweepArgs),
    /// Score a saved fit against ground truth.
    Eval(EvalArgs),
    /// Write a synthetic dataset as CSV with indicator label columns.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value = "rtkm")]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub k: usize,
    /// Minimum clusters per point.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    #[arg(long, default_value_t = 1.1)]
    pub step_d: f64,
    #[arg(long, default_value_t = 1.1)]
    pub step_e: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Base seed; restart i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Center initialization: random-points or kmeans++.
    #[arg(long, default_value = "random-points")]
    pub init: InitMethod,
    /// Initial memberships: uniform, random or nearest.
    #[arg(long, default_value = "uniform")]
    pub weight_init: WeightInit,
}

impl SolverArgs {
    pub fn config(&self, alpha: f64) -> CliResult<SolverConfig> {
        let config = SolverConfig::new(self.k)
            .with_s(self.s)
            .with_alpha(alpha)
            .with_steps(self.step_d, self.step_e)
            .with_max_iters(self.max_iters)
            .with_tol(self.tol)
            .with_seed(self.seed)
            .with_init(self.init)
            .with_weight_init(self.weight_init);
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Expected fraction of outliers.
    #[arg(long, default_value_t = 0.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    /// Result JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record wall time per run (makes output differ between runs).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated values and start:stop:step ranges in [0, 1).
    #[arg(long)]
    pub alpha_grid: String,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// CSV path; the manifest goes next to it as `<out>.manifest.json`.
    /// The CSV goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Result JSON written by `fit`.
    #[arg(long)]
    pub result: PathBuf,
    /// Rebuild the ground truth from the dataset recorded in the result.
    #[arg(long, conflicts_with_all = ["data", "synthetic"])]
    pub truth_from_manifest: bool,
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// Metrics JSON path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    #[arg(long, default_value_t = 0)]
    pub noise: usize,
    #[arg(long, default_value_t = 0)]
    pub noise_seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}
