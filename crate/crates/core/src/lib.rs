//! Robust trimmed k-means.
//!
//! Clusters points, optionally with membership in several clusters, while
//! flagging a prescribed fraction of them as outliers. Also provides the
//! classical ancestors (Lloyd, relaxed and staged trimmed k-means), the
//! average-F1 and ROC-distance evaluation measures, and dataset loading and
//! generation utilities.

pub mod data;
pub mod error;
pub mod geometry;
pub mod metrics;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{project_capped_simplex, CappedSimplex};
pub use solver::{
    fit, fit_from, fit_kmeans, fit_relaxed_kmeans, fit_rtkm, fit_trimmed_kmeans, Algorithm,
    Centers, Dataset, FitResult, InitMethod, InlierVector, MembershipMatrix, SolverConfig,
    WeightInit,
};
