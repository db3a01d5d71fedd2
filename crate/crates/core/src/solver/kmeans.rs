//! Lloyd k-means and the staged trimmed k-means baseline.

use ndarray::{Array1, Array2};

use super::config::SolverConfig;
use super::objective::squared_distances;
use super::types::{outlier_count, Centers, Dataset, FitResult, InlierVector, MembershipMatrix};
use super::update::{nearest_labels, update_centers};
use crate::error::{Error, Result};

pub(crate) fn check_centers(data: &Dataset, config: &SolverConfig, centers: &Centers) -> Result<()> {
    if centers.matrix().nrows() != data.n_features() {
        return Err(Error::DimensionMismatch {
            what: "initial center feature count",
            expected: data.n_features(),
            got: centers.matrix().nrows(),
        });
    }
    if centers.k() != config.k {
        return Err(Error::DimensionMismatch {
            what: "initial center count",
            expected: config.k,
            got: centers.k(),
        });
    }
    Ok(())
}

fn require_single_membership(config: &SolverConfig, name: &str) -> Result<()> {
    if config.s != 1 {
        return Err(Error::InvalidConfig(format!(
            "{name} produces single-membership clusterings and needs s = 1, got s = {}",
            config.s
        )));
    }
    Ok(())
}

fn finite(value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what: "objective" })
    }
}

fn one_hot(labels: &[usize], k: usize) -> Array2<f64> {
    let mut w = Array2::zeros((k, labels.len()));
    for (i, &j) in labels.iter().enumerate() {
        w[[j, i]] = 1.0;
    }
    w
}

fn assigned_cost(dist: &Array2<f64>, labels: &[usize], trimmed: Option<&[bool]>) -> f64 {
    labels
        .iter()
        .enumerate()
        .filter(|(i, _)| trimmed.is_none_or(|t| !t[*i]))
        .map(|(i, &j)| dist[[j, i]])
        .sum()
}

/// Lloyd iterations from explicit starting centers: assign every point to
/// its nearest center, then move each center to the mean of its points,
/// until the assignment repeats or `max_iters` center updates have run.
pub fn fit_kmeans_from(data: &Dataset, config: &SolverConfig, initial: Centers) -> Result<FitResult> {
    config.validate_for(data.n_points())?;
    require_single_membership(config, "k-means")?;
    check_centers(data, config, &initial)?;
    let n = data.n_points();
    let k = config.k;
    let points = data.points();
    let mut centers = initial;

    let mut labels: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut dist = squared_distances(points, centers.matrix());
    for _ in 0..config.max_iters {
        let next = nearest_labels(&dist);
        if next == labels {
            converged = true;
            break;
        }
        labels = next;
        update_centers(points, &one_hot(&labels, k), None, centers.matrix_mut());
        dist = squared_distances(points, centers.matrix());
        trace.push(finite(assigned_cost(&dist, &labels, None))?);
    }
    if !converged && nearest_labels(&dist) == labels {
        converged = true;
    }

    let iterations = trace.len();
    Ok(FitResult {
        memberships: MembershipMatrix::from_raw(one_hot(&labels, k), 1),
        inliers: InlierVector::ones(n),
        hard_assignments: labels.iter().map(|&j| vec![j]).collect(),
        outlier_flags: vec![false; n],
        centers,
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// Flags the `count` points with the largest distance, ties to the lowest index.
fn largest_flags(values: &[f64], count: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut flags = vec![false; values.len()];
    for &i in order.iter().take(count) {
        flags[i] = true;
    }
    flags
}

/// Staged trimmed k-means: run k-means to convergence, then repeatedly drop
/// the `[alpha N]` points farthest from their centers, recompute each center
/// as the mean of its remaining points, and reassign, until the assignment
/// and the trimmed set both repeat.
pub fn fit_trimmed_kmeans_from(
    data: &Dataset,
    config: &SolverConfig,
    initial: Centers,
) -> Result<FitResult> {
    config.validate_for(data.n_points())?;
    require_single_membership(config, "trimmed k-means")?;
    let n = data.n_points();
    let trim = outlier_count(config.alpha, n)?;
    if config.k > n - trim {
        return Err(Error::TooFewPoints {
            k: config.k,
            n: n - trim,
        });
    }

    let base = fit_kmeans_from(data, config, initial)?;
    if trim == 0 {
        return Ok(FitResult {
            inliers: InlierVector::from_raw(Array1::ones(n), config.alpha),
            ..base
        });
    }

    let points = data.points();
    let k = config.k;
    let mut centers = base.centers;
    let mut trace = base.objective_trace;
    let mut labels: Vec<usize> = base.hard_assignments.iter().map(|s| s[0]).collect();
    let mut trimmed = vec![false; n];
    let mut converged = false;
    let mut rounds = 0;
    let mut dist = squared_distances(points, centers.matrix());
    for _ in 0..config.max_iters {
        let next_labels = nearest_labels(&dist);
        let own: Vec<f64> = next_labels
            .iter()
            .enumerate()
            .map(|(i, &j)| dist[[j, i]])
            .collect();
        let next_trimmed = largest_flags(&own, trim);
        if next_labels == labels && next_trimmed == trimmed {
            converged = true;
            break;
        }
        labels = next_labels;
        trimmed = next_trimmed;
        let keep: Vec<f64> = trimmed.iter().map(|&t| if t { 0.0 } else { 1.0 }).collect();
        update_centers(points, &one_hot(&labels, k), Some(&keep), centers.matrix_mut());
        dist = squared_distances(points, centers.matrix());
        trace.push(finite(assigned_cost(&dist, &labels, Some(&trimmed)))?);
        rounds += 1;
    }

    let inliers: Array1<f64> = trimmed.iter().map(|&t| if t { 0.0 } else { 1.0 }).collect();
    Ok(FitResult {
        memberships: MembershipMatrix::from_raw(one_hot(&labels, k), 1),
        inliers: InlierVector::from_raw(inliers, config.alpha),
        hard_assignments: labels
            .iter()
            .zip(&trimmed)
            .map(|(&j, &t)| if t { Vec::new() } else { vec![j] })
            .collect(),
        outlier_flags: trimmed,
        centers,
        objective_trace: trace,
        iterations: base.iterations + rounds,
        converged,
    })
}
