use rtkm::{Algorithm, FitResult, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::dataset::DatasetIdentity;

/// How the reported result was chosen among restarts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// Lowest final objective; ties go to the earlier seed.
    BestObjective,
    /// Every run is reported.
    All,
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub alpha: f64,
    pub seed: u64,
    pub objective: Option<f64>,
    pub average_f1: Option<f64>,
    pub me: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub n_outliers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Provenance carried by every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub algorithm: Algorithm,
    /// Base configuration; `seed` and `alpha` vary per run as recorded.
    pub config: SolverConfig,
    pub dataset: DatasetIdentity,
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alpha_grid: Vec<f64>,
    pub selection: Selection,
    pub runs: Vec<RunRecord>,
}

/// What `fit` writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitArtifact {
    pub manifest: RunManifest,
    /// Seed of the selected run.
    pub selected_seed: u64,
    pub result: FitResult,
}

/// What `eval` writes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub result_seed: u64,
    pub n_points: usize,
    pub average_f1: f64,
    /// Present when the truth has both outliers and inliers.
    pub me: Option<f64>,
    pub predicted_outliers: usize,
    pub truth_outliers: usize,
}

/// One row of the sweep table. Column order is frozen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub restarts: usize,
    pub f1_min: Option<f64>,
    pub f1_mean: Option<f64>,
    pub f1_max: Option<f64>,
    pub me_min: Option<f64>,
    pub me_mean: Option<f64>,
    pub me_max: Option<f64>,
    pub failures: usize,
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "alpha", "restarts", "f1_min", "f1_mean", "f1_max", "me_min", "me_mean", "me_max", "failures",
];
