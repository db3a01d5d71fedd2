use ndarray::Array2;

use super::types::{Centers, Dataset, InlierVector, MembershipMatrix};
use crate::error::{Error, Result};

/// Squared Euclidean distances, `k` by `N`: entry `(j, i)` is `||x_i - c_j||^2`.
pub(crate) fn squared_distances(points: &Array2<f64>, centers: &Array2<f64>) -> Array2<f64> {
    let (m, n) = points.dim();
    let k = centers.ncols();
    let mut out = Array2::zeros((k, n));
    for i in 0..n {
        for j in 0..k {
            let mut acc = 0.0;
            for f in 0..m {
                let d = points[[f, i]] - centers[[f, j]];
                acc += d * d;
            }
            out[[j, i]] = acc;
        }
    }
    out
}

fn check_dims(
    data: &Dataset,
    centers: &Centers,
    memberships: &MembershipMatrix,
) -> Result<()> {
    if centers.matrix().nrows() != data.n_features() {
        return Err(Error::DimensionMismatch {
            what: "center feature count",
            expected: data.n_features(),
            got: centers.matrix().nrows(),
        });
    }
    if memberships.k() != centers.k() {
        return Err(Error::DimensionMismatch {
            what: "membership rows",
            expected: centers.k(),
            got: memberships.k(),
        });
    }
    if memberships.n_points() != data.n_points() {
        return Err(Error::DimensionMismatch {
            what: "membership columns",
            expected: data.n_points(),
            got: memberships.n_points(),
        });
    }
    Ok(())
}

/// `sum_j sum_i w_ji ||x_i - c_j||^2`.
pub fn objective_kmeans(
    data: &Dataset,
    centers: &Centers,
    memberships: &MembershipMatrix,
) -> Result<f64> {
    check_dims(data, centers, memberships)?;
    let dist = squared_distances(data.points(), centers.matrix());
    Ok(weighted_sum(&dist, memberships.matrix(), None))
}

/// `sum_i v_i sum_j w_ji ||x_i - c_j||^2`.
pub fn objective_rtkm(
    data: &Dataset,
    centers: &Centers,
    memberships: &MembershipMatrix,
    inliers: &InlierVector,
) -> Result<f64> {
    check_dims(data, centers, memberships)?;
    if inliers.len() != data.n_points() {
        return Err(Error::DimensionMismatch {
            what: "inlier vector",
            expected: data.n_points(),
            got: inliers.len(),
        });
    }
    let dist = squared_distances(data.points(), centers.matrix());
    Ok(weighted_sum(
        &dist,
        memberships.matrix(),
        Some(inliers.values().as_slice().expect("contiguous inlier vector")),
    ))
}

/// Objective from precomputed distances. Per-point costs are summed in
/// index order so that every solver reports bit-comparable values.
pub(crate) fn weighted_sum(dist: &Array2<f64>, weights: &Array2<f64>, inliers: Option<&[f64]>) -> f64 {
    let (k, n) = dist.dim();
    let mut total = 0.0;
    for i in 0..n {
        let mut cost = 0.0;
        for j in 0..k {
            cost += weights[[j, i]] * dist[[j, i]];
        }
        total += match inliers {
            Some(v) => v[i] * cost,
            None => cost,
        };
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};

    #[test]
    fn point_on_its_center_costs_nothing() {
        let data = Dataset::new(array![[3.0], [4.0]]).unwrap();
        let c = Centers::new(array![[3.0], [4.0]]).unwrap();
        let w = MembershipMatrix::new(array![[1.0]], 1).unwrap();
        assert_eq!(objective_kmeans(&data, &c, &w).unwrap(), 0.0);
    }

    #[test]
    fn split_membership_between_two_centers() {
        let data = Dataset::new(array![[0.0]]).unwrap();
        let c = Centers::new(array![[1.0, -1.0]]).unwrap();
        let w = MembershipMatrix::new(array![[0.5], [0.5]], 1).unwrap();
        assert_eq!(objective_kmeans(&data, &c, &w).unwrap(), 1.0);
    }

    #[test]
    fn two_identical_points_at_distance_d() {
        let d = 1.5;
        let data = Dataset::new(array![[d, d], [0.0, 0.0]]).unwrap();
        let c = Centers::new(array![[0.0], [0.0]]).unwrap();
        let w = MembershipMatrix::new(array![[1.0, 1.0]], 1).unwrap();
        assert_eq!(objective_kmeans(&data, &c, &w).unwrap(), 2.0 * d * d);
    }

    #[test]
    fn rtkm_objective_scales_by_inlier_weight() {
        let data = Dataset::new(array![[0.0, 2.0]]).unwrap();
        let c = Centers::new(array![[2.0]]).unwrap();
        let w = MembershipMatrix::new(array![[1.0, 1.0]], 1).unwrap();
        // alpha = 0.5 on two points leaves mass 1.
        let v = InlierVector::new(Array1::from(vec![0.5, 0.5]), 0.5).unwrap();
        assert_eq!(objective_rtkm(&data, &c, &w, &v).unwrap(), 2.0);
    }

    #[test]
    fn zero_inlier_weight_silences_far_point() {
        let data = Dataset::new(array![[0.0, 100.0]]).unwrap();
        let c = Centers::new(array![[0.0]]).unwrap();
        let w = MembershipMatrix::new(array![[1.0, 1.0]], 1).unwrap();
        let v = InlierVector::new(Array1::from(vec![1.0, 0.0]), 0.5).unwrap();
        assert_eq!(objective_rtkm(&data, &c, &w, &v).unwrap(), 0.0);
    }

    #[test]
    fn unit_inliers_reduce_to_kmeans_objective() {
        let data = Dataset::new(array![[0.0, 1.0, 5.0], [1.0, 2.0, -1.0]]).unwrap();
        let c = Centers::new(array![[0.0, 4.0], [0.0, 0.0]]).unwrap();
        let w = MembershipMatrix::new(array![[0.3, 1.0, 0.0], [0.7, 0.0, 1.0]], 1).unwrap();
        let a = objective_kmeans(&data, &c, &w).unwrap();
        let b = objective_rtkm(&data, &c, &w, &InlierVector::ones(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let data = Dataset::new(array![[0.0, 1.0]]).unwrap();
        let c = Centers::new(array![[0.0], [1.0]]).unwrap();
        let w = MembershipMatrix::new(array![[1.0, 1.0]], 1).unwrap();
        assert!(matches!(
            objective_kmeans(&data, &c, &w),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = Centers::new(array![[0.0]]).unwrap();
        let v = InlierVector::ones(3);
        assert!(objective_rtkm(&data, &c, &w, &v).is_err());
    }
}
