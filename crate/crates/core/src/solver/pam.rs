//! Relaxed k-means and robust trimmed k-means, both solved by proximal
//! alternating minimization.
//!
//! One iteration runs three block steps, each of which cannot increase
//! `sum_i v_i sum_j w_ji ||x_i - c_j||^2`:
//!
//! 1. every membership column takes a projected step
//!    `w_i <- proj_s(w_i - v_i g_i / step_d)` where `g_i` holds the squared
//!    distances from `x_i` to each center;
//! 2. (robust only) the inlier vector takes a projected step
//!    `v <- proj_{N - [alpha N]}(v - h / step_e)` where `h_i = sum_j w_ji g_ji`;
//! 3. every center moves to the `v_i w_ji`-weighted mean of the points.
//!
//! The initial centers stand in for the first center step, so the cycle
//! starts with the membership update.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::assign::hard_assign_with_threshold;
use super::config::{SolverConfig, WeightInit};
use super::init::WEIGHT_STREAM;
use super::kmeans::check_centers;
use super::objective::{squared_distances, weighted_sum};
use super::types::{outlier_count, Centers, Dataset, FitResult, InlierVector, MembershipMatrix};
use super::update::update_centers;
use crate::error::{Error, Result};
use crate::geometry::CappedSimplex;

/// State after one completed iteration, handed to observers.
#[derive(Debug)]
pub struct IterationSnapshot<'a> {
    /// 1-based iteration number.
    pub iteration: usize,
    pub centers: &'a Array2<f64>,
    pub memberships: &'a Array2<f64>,
    pub inliers: &'a Array1<f64>,
    pub objective: f64,
}

fn initial_weights(config: &SolverConfig, dist: &Array2<f64>) -> Result<Array2<f64>> {
    let (k, n) = dist.dim();
    let s = config.s;
    Ok(match config.weight_init {
        WeightInit::Uniform => Array2::from_elem((k, n), s as f64 / k as f64),
        WeightInit::Random => {
            let simplex = CappedSimplex::new(k, s as f64)?;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ WEIGHT_STREAM);
            let mut w = Array2::zeros((k, n));
            let mut draw = vec![0.0; k];
            let mut col = vec![0.0; k];
            for i in 0..n {
                draw.iter_mut().for_each(|d| *d = rng.random::<f64>());
                simplex.project_into(&draw, &mut col)?;
                for j in 0..k {
                    w[[j, i]] = col[j];
                }
            }
            w
        }
        WeightInit::Nearest => {
            let mut w = Array2::zeros((k, n));
            for i in 0..n {
                let mut order: Vec<usize> = (0..k).collect();
                order.sort_by(|&a, &b| dist[[a, i]].total_cmp(&dist[[b, i]]).then(a.cmp(&b)));
                for &j in order.iter().take(s) {
                    w[[j, i]] = 1.0;
                }
            }
            w
        }
    })
}

pub(crate) fn run(
    data: &Dataset,
    config: &SolverConfig,
    initial: Centers,
    robust: bool,
    observer: &mut dyn FnMut(&IterationSnapshot<'_>),
) -> Result<FitResult> {
    config.validate_for(data.n_points())?;
    check_centers(data, config, &initial)?;
    let n = data.n_points();
    let k = config.k;
    let alpha = if robust { config.alpha } else { 0.0 };
    let trim = outlier_count(alpha, n)?;
    let points = data.points();

    let weight_simplex = CappedSimplex::new(k, config.s as f64)?;
    let inlier_simplex = CappedSimplex::new(n, (n - trim) as f64)?;

    let mut centers = initial;
    let mut dist = squared_distances(points, centers.matrix());
    let mut w = initial_weights(config, &dist)?;
    let mut v = Array1::from_elem(n, (n - trim) as f64 / n as f64);

    let mut trace: Vec<f64> = Vec::new();
    let mut converged = false;
    let mut step = vec![0.0; k];
    let mut projected = vec![0.0; k];
    let mut inlier_step = vec![0.0; n];
    let mut inlier_next = vec![0.0; n];
    for iteration in 1..=config.max_iters {
        for i in 0..n {
            let scale = v[i] / config.step_d;
            for j in 0..k {
                step[j] = w[[j, i]] - scale * dist[[j, i]];
            }
            weight_simplex.project_into(&step, &mut projected)?;
            for j in 0..k {
                w[[j, i]] = projected[j];
            }
        }

        if robust {
            for i in 0..n {
                let mut cost = 0.0;
                for j in 0..k {
                    cost += w[[j, i]] * dist[[j, i]];
                }
                inlier_step[i] = v[i] - cost / config.step_e;
            }
            inlier_simplex.project_into(&inlier_step, &mut inlier_next)?;
            v.as_slice_mut()
                .expect("contiguous")
                .copy_from_slice(&inlier_next);
        }

        update_centers(
            points,
            &w,
            Some(v.as_slice().expect("contiguous")),
            centers.matrix_mut(),
        );
        dist = squared_distances(points, centers.matrix());
        let objective = weighted_sum(&dist, &w, Some(v.as_slice().expect("contiguous")));
        if !objective.is_finite() {
            return Err(Error::NonFinite { what: "objective" });
        }
        observer(&IterationSnapshot {
            iteration,
            centers: centers.matrix(),
            memberships: &w,
            inliers: &v,
            objective,
        });

        let previous = trace.last().copied();
        trace.push(objective);
        if let Some(prev) = previous {
            if (objective - prev).abs() <= config.tol * prev.max(1.0) {
                converged = true;
                break;
            }
        }
    }

    let memberships = MembershipMatrix::from_raw(w, config.s);
    let inliers = InlierVector::from_raw(v, alpha);
    let (hard_assignments, outlier_flags) =
        hard_assign_with_threshold(&memberships, &inliers, config.support_threshold);
    let iterations = trace.len();
    Ok(FitResult {
        centers,
        memberships,
        inliers,
        hard_assignments,
        outlier_flags,
        objective_trace: trace,
        iterations,
        converged,
    })
}
