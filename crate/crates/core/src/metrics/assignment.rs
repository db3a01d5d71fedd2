//! Maximum-weight bipartite assignment (Hungarian method with potentials).

/// Solves the assignment problem on a rectangular weight matrix, maximizing
/// the total weight. Returns, for every row, the matched column (or `None`
/// when there are more rows than columns and the row is left over).
///
/// Runs in `O(n^3)` for `n = max(rows, cols)`. Weights must be finite.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    debug_assert!(weights.iter().all(|r| r.len() == cols));
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    let n = rows.max(cols);
    // Minimize negated weights on a zero-padded square matrix.
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            -weights[i][j]
        } else {
            0.0
        }
    };

    // 1-based potentials; column 0 is a sentinel.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut min_slack = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let slack = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if slack < min_slack[j] {
                    min_slack[j] = slack;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut matched = vec![None; rows];
    for (j, &i) in row_of.iter().enumerate().skip(1) {
        if i >= 1 && i <= rows && j <= cols {
            matched[i - 1] = Some(j - 1);
        }
    }
    matched
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(w: &[Vec<f64>], m: &[Option<usize>]) -> f64 {
        m.iter()
            .enumerate()
            .filter_map(|(i, j)| j.map(|j| w[i][j]))
            .sum()
    }

    #[test]
    fn picks_the_anti_diagonal_when_it_is_heavier() {
        let w = vec![vec![1.0, 5.0], vec![4.0, 1.0]];
        let m = max_weight_assignment(&w);
        assert_eq!(m, vec![Some(1), Some(0)]);
    }

    #[test]
    fn greedy_would_be_wrong_here() {
        // Greedy takes 0.9 first and ends with 0.9 + 0.0.
        let w = vec![vec![0.9, 0.8], vec![0.7, 0.0]];
        let m = max_weight_assignment(&w);
        assert!((total(&w, &m) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn more_rows_than_columns() {
        let w = vec![vec![0.1], vec![0.7], vec![0.3]];
        assert_eq!(max_weight_assignment(&w), vec![None, Some(0), None]);
    }

    #[test]
    fn more_columns_than_rows() {
        let w = vec![vec![0.1, 0.2, 0.9]];
        assert_eq!(max_weight_assignment(&w), vec![Some(2)]);
    }

    #[test]
    fn empty_inputs() {
        assert!(max_weight_assignment(&[]).is_empty());
        assert_eq!(max_weight_assignment(&[vec![], vec![]]), vec![None, None]);
    }
}
