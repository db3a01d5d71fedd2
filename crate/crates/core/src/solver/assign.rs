use super::types::{outlier_count, InlierVector, MembershipMatrix};

/// Default weight above which a cluster counts as a member when `s > 1`.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 1e-6;

/// Extracts discrete assignments from relaxed weights with the default
/// support threshold. See [`hard_assign_with_threshold`].
pub fn hard_assign(
    memberships: &MembershipMatrix,
    inliers: &InlierVector,
) -> (Vec<Vec<usize>>, Vec<bool>) {
    hard_assign_with_threshold(memberships, inliers, DEFAULT_SUPPORT_THRESHOLD)
}

/// Flags the `[alpha N]` points with the smallest inlier weight as outliers
/// (ties to the lowest index) and gives them empty assignment sets. Every
/// other point gets the argmax cluster when `s = 1` (ties to the lowest
/// index) or every cluster with weight above `threshold` when `s > 1`.
///
/// # Panics
///
/// Panics if `memberships` and `inliers` disagree on the number of points.
pub fn hard_assign_with_threshold(
    memberships: &MembershipMatrix,
    inliers: &InlierVector,
    threshold: f64,
) -> (Vec<Vec<usize>>, Vec<bool>) {
    let n = memberships.n_points();
    assert_eq!(n, inliers.len(), "membership and inlier lengths differ");
    let count = outlier_count(inliers.alpha(), n).expect("inlier vector carries a valid alpha");
    let flags = smallest_flags(inliers.values().as_slice().expect("contiguous"), count);

    let w = memberships.matrix();
    let sets = (0..n)
        .map(|i| {
            if flags[i] {
                return Vec::new();
            }
            let col = w.column(i);
            if memberships.s() == 1 {
                let mut best = 0;
                for (j, &value) in col.iter().enumerate() {
                    if value > col[best] {
                        best = j;
                    }
                }
                vec![best]
            } else {
                col.iter()
                    .enumerate()
                    .filter(|(_, &value)| value > threshold)
                    .map(|(j, _)| j)
                    .collect()
            }
        })
        .collect();
    (sets, flags)
}

/// Marks the `count` smallest entries, breaking ties toward lower indices.
pub(crate) fn smallest_flags(values: &[f64], count: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut flags = vec![false; values.len()];
    for &i in order.iter().take(count) {
        flags[i] = true;
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};

    #[test]
    fn argmax_for_single_membership() {
        let w = MembershipMatrix::new(array![[0.9], [0.1]], 1).unwrap();
        let (sets, flags) = hard_assign(&w, &InlierVector::ones(1));
        assert_eq!(sets, vec![vec![0]]);
        assert_eq!(flags, vec![false]);
    }

    #[test]
    fn support_for_multi_membership() {
        let w = MembershipMatrix::new(array![[1.0], [1.0], [0.0]], 2).unwrap();
        let (sets, _) = hard_assign(&w, &InlierVector::ones(1));
        assert_eq!(sets, vec![vec![0, 1]]);
    }

    #[test]
    fn argmax_ties_go_to_lowest_index() {
        let w = MembershipMatrix::new(array![[0.5], [0.5]], 1).unwrap();
        let (sets, _) = hard_assign(&w, &InlierVector::ones(1));
        assert_eq!(sets, vec![vec![0]]);
    }

    #[test]
    fn outliers_get_empty_sets() {
        let w = MembershipMatrix::new(array![[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]], 1).unwrap();
        // alpha = 0.25 on 4 points trims 1.
        let v = InlierVector::new(Array1::from(vec![1.0, 1.0, 0.0, 1.0]), 0.25).unwrap();
        let (sets, flags) = hard_assign(&w, &v);
        assert_eq!(flags, vec![false, false, true, false]);
        assert_eq!(sets, vec![vec![0], vec![1], vec![], vec![1]]);
    }

    #[test]
    fn outlier_ties_go_to_lowest_index() {
        let w = MembershipMatrix::uniform(1, 4, 1).unwrap();
        let v = InlierVector::uniform(4, 0.5).unwrap();
        let (_, flags) = hard_assign(&w, &v);
        assert_eq!(flags, vec![true, true, false, false]);
    }

    #[test]
    fn threshold_is_configurable() {
        let w = MembershipMatrix::new(array![[0.999], [0.9], [0.101]], 2).unwrap();
        let (sets, _) = hard_assign_with_threshold(&w, &InlierVector::ones(1), 0.2);
        assert_eq!(sets, vec![vec![0, 1]]);
        let (sets, _) = hard_assign(&w, &InlierVector::ones(1));
        assert_eq!(sets, vec![vec![0, 1, 2]]);
    }
}
