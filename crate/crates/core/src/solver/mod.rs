//! Clustering solvers: Lloyd k-means, relaxed k-means, robust trimmed
//! k-means (RTKM), and the staged trimmed k-means baseline.
//!
//! Every `fit_*` function draws its starting centers with [`init_centers`];
//! the matching `fit_*_from` function takes explicit centers instead.

mod assign;
mod config;
mod init;
mod kmeans;
mod objective;
mod pam;
mod types;
mod update;

pub use assign::{hard_assign, hard_assign_with_threshold, DEFAULT_SUPPORT_THRESHOLD};
pub use config::{Algorithm, InitMethod, SolverConfig, WeightInit};
pub use init::init_centers;
pub use kmeans::{fit_kmeans_from, fit_trimmed_kmeans_from};
pub use objective::{objective_kmeans, objective_rtkm};
pub use pam::IterationSnapshot;
pub use types::{
    outlier_count, Centers, Dataset, FitResult, InlierVector, MembershipMatrix,
};

use crate::error::Result;

pub fn fit_kmeans(data: &Dataset, config: &SolverConfig) -> Result<FitResult> {
    fit_kmeans_from(data, config, init_centers(data, config)?)
}

pub fn fit_trimmed_kmeans(data: &Dataset, config: &SolverConfig) -> Result<FitResult> {
    fit_trimmed_kmeans_from(data, config, init_centers(data, config)?)
}

/// Relaxed k-means: memberships range over the `s`-capped simplex.
pub fn fit_relaxed_kmeans(data: &Dataset, config: &SolverConfig) -> Result<FitResult> {
    fit_relaxed_kmeans_from(data, config, init_centers(data, config)?)
}

pub fn fit_relaxed_kmeans_from(
    data: &Dataset,
    config: &SolverConfig,
    initial: Centers,
) -> Result<FitResult> {
    pam::run(data, config, initial, false, &mut |_| {})
}

/// Relaxed k-means with a per-iteration callback.
pub fn fit_relaxed_kmeans_observed(
    data: &Dataset,
    config: &SolverConfig,
    initial: Centers,
    observer: &mut dyn FnMut(&IterationSnapshot<'_>),
) -> Result<FitResult> {
    pam::run(data, config, initial, false, observer)
}

/// Robust trimmed k-means: clusters points and flags exactly
/// `[alpha N]` outliers.
pub fn fit_rtkm(data: &Dataset, config: &SolverConfig) -> Result<FitResult> {
    fit_rtkm_from(data, config, init_centers(data, config)?)
}

pub fn fit_rtkm_from(data: &Dataset, config: &SolverConfig, initial: Centers) -> Result<FitResult> {
    pam::run(data, config, initial, true, &mut |_| {})
}

/// Robust trimmed k-means with a per-iteration callback.
pub fn fit_rtkm_observed(
    data: &Dataset,
    config: &SolverConfig,
    initial: Centers,
    observer: &mut dyn FnMut(&IterationSnapshot<'_>),
) -> Result<FitResult> {
    pam::run(data, config, initial, true, observer)
}

/// Runs `algorithm` with centers drawn from `config`.
pub fn fit(algorithm: Algorithm, data: &Dataset, config: &SolverConfig) -> Result<FitResult> {
    fit_from(algorithm, data, config, init_centers(data, config)?)
}

pub fn fit_from(
    algorithm: Algorithm,
    data: &Dataset,
    config: &SolverConfig,
    initial: Centers,
) -> Result<FitResult> {
    match algorithm {
        Algorithm::KMeans => fit_kmeans_from(data, config, initial),
        Algorithm::Relaxed => fit_relaxed_kmeans_from(data, config, initial),
        Algorithm::Rtkm => fit_rtkm_from(data, config, initial),
        Algorithm::Trimmed => fit_trimmed_kmeans_from(data, config, initial),
    }
}
