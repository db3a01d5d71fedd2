use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Data points stored column-wise (`m` features by `N` points), with
/// optional ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    points: Array2<f64>,
    truth_memberships: Option<Vec<Vec<usize>>>,
    truth_outliers: Option<Vec<bool>>,
}

pub(crate) type DatasetParts = (Array2<f64>, Option<Vec<Vec<usize>>>, Option<Vec<bool>>);

impl Dataset {
    pub fn new(points: Array2<f64>) -> Result<Self> {
        let (m, n) = points.dim();
        if m == 0 || n == 0 {
            return Err(Error::InvalidData(format!(
                "dataset must have at least one feature and one point, got {m}x{n}"
            )));
        }
        if points.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "dataset points",
            });
        }
        Ok(Self {
            points,
            truth_memberships: None,
            truth_outliers: None,
        })
    }

    /// Builds a dataset from row-major records (one record per point).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::Parse {
                row: i,
                msg: format!("expected {m} features, found {}", r.len()),
            });
        }
        let points = Array2::from_shape_fn((m, n), |(f, i)| rows[i][f]);
        Self::new(points)
    }

    /// Attaches ground truth. Membership lists are sorted and deduplicated;
    /// points flagged as outliers must have empty membership lists.
    pub fn with_truth(
        mut self,
        memberships: Option<Vec<Vec<usize>>>,
        outliers: Option<Vec<bool>>,
    ) -> Result<Self> {
        let n = self.n_points();
        let memberships = memberships
            .map(|mut ms| {
                if ms.len() != n {
                    return Err(Error::DimensionMismatch {
                        what: "truth memberships",
                        expected: n,
                        got: ms.len(),
                    });
                }
                for set in &mut ms {
                    set.sort_unstable();
                    set.dedup();
                }
                Ok(ms)
            })
            .transpose()?;
        if let Some(flags) = &outliers {
            if flags.len() != n {
                return Err(Error::DimensionMismatch {
                    what: "truth outlier flags",
                    expected: n,
                    got: flags.len(),
                });
            }
            if let Some(ms) = &memberships {
                if let Some(i) = (0..n).find(|&i| flags[i] && !ms[i].is_empty()) {
                    return Err(Error::InvalidData(format!(
                        "point {i} is flagged as an outlier but has cluster memberships"
                    )));
                }
            }
        }
        self.truth_memberships = memberships;
        self.truth_outliers = outliers;
        Ok(self)
    }

    pub fn points(&self) -> &Array2<f64> {
        &self.points
    }

    pub fn point(&self, i: usize) -> ArrayView1<'_, f64> {
        self.points.column(i)
    }

    pub fn n_points(&self) -> usize {
        self.points.ncols()
    }

    pub fn n_features(&self) -> usize {
        self.points.nrows()
    }

    pub fn truth_memberships(&self) -> Option<&[Vec<usize>]> {
        self.truth_memberships.as_deref()
    }

    pub fn truth_outliers(&self) -> Option<&[bool]> {
        self.truth_outliers.as_deref()
    }

    /// Number of distinct truth clusters (largest index + 1).
    pub fn truth_cluster_count(&self) -> Option<usize> {
        self.truth_memberships.as_ref().map(|ms| {
            ms.iter()
                .flat_map(|s| s.iter().copied())
                .max()
                .map_or(0, |j| j + 1)
        })
    }

    /// Returns a copy whose columns are reordered so that new column `t`
    /// is old column `order[t]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_points();
        if order.len() != n {
            return Err(Error::DimensionMismatch {
                what: "permutation",
                expected: n,
                got: order.len(),
            });
        }
        let points = self.points.select(Axis(1), order);
        Ok(Self {
            points,
            truth_memberships: self
                .truth_memberships
                .as_ref()
                .map(|ms| order.iter().map(|&i| ms[i].clone()).collect()),
            truth_outliers: self
                .truth_outliers
                .as_ref()
                .map(|fs| order.iter().map(|&i| fs[i]).collect()),
        })
    }

    /// Z-scores every feature. Constant features are centered only.
    pub fn standardized(&self) -> Self {
        let mut points = self.points.clone();
        let n = self.n_points() as f64;
        for mut row in points.rows_mut() {
            let mean = row.sum() / n;
            let var = row.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            let sd = var.sqrt();
            row.mapv_inplace(|v| if sd > 0.0 { (v - mean) / sd } else { v - mean });
        }
        Self {
            points,
            truth_memberships: self.truth_memberships.clone(),
            truth_outliers: self.truth_outliers.clone(),
        }
    }

    pub(crate) fn into_parts(self) -> DatasetParts {
        (self.points, self.truth_memberships, self.truth_outliers)
    }
}

/// Cluster centroids, one per column (`m` by `k`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centers(Array2<f64>);

impl Centers {
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        if matrix.ncols() == 0 || matrix.nrows() == 0 {
            return Err(Error::InvalidConfig("centers need k >= 1 columns".into()));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "centers" });
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.ncols()
    }

    pub fn center(&self, j: usize) -> ArrayView1<'_, f64> {
        self.0.column(j)
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut Array2<f64> {
        &mut self.0
    }
}

/// `k` by `N` weights; every column lies in the `s`-capped simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipMatrix {
    matrix: Array2<f64>,
    s: usize,
}

impl MembershipMatrix {
    /// Tolerance on column sums accepted by [`MembershipMatrix::new`].
    pub const SUM_TOLERANCE: f64 = 1e-8;

    pub fn new(matrix: Array2<f64>, s: usize) -> Result<Self> {
        let k = matrix.nrows();
        if s == 0 || s > k {
            return Err(Error::InvalidConfig(format!(
                "membership mass s={s} must satisfy 1 <= s <= k={k}"
            )));
        }
        for (i, col) in matrix.columns().into_iter().enumerate() {
            if col
                .iter()
                .any(|&w| !w.is_finite() || !(-Self::SUM_TOLERANCE..=1.0 + Self::SUM_TOLERANCE).contains(&w))
            {
                return Err(Error::InvalidData(format!(
                    "membership column {i} has entries outside [0, 1]"
                )));
            }
            let sum = col.sum();
            if (sum - s as f64).abs() > Self::SUM_TOLERANCE {
                return Err(Error::InvalidData(format!(
                    "membership column {i} sums to {sum}, expected {s}"
                )));
            }
        }
        Ok(Self { matrix, s })
    }

    /// Every column set to the uniform feasible point `s / k`.
    pub fn uniform(k: usize, n: usize, s: usize) -> Result<Self> {
        Self::new(Array2::from_elem((k, n), s as f64 / k as f64), s)
    }

    /// One-hot columns from single cluster labels.
    pub fn one_hot(labels: &[usize], k: usize) -> Result<Self> {
        let mut matrix = Array2::zeros((k, labels.len()));
        for (i, &j) in labels.iter().enumerate() {
            if j >= k {
                return Err(Error::InvalidData(format!(
                    "label {j} of point {i} out of range for k={k}"
                )));
            }
            matrix[[j, i]] = 1.0;
        }
        Self::new(matrix, 1)
    }

    pub(crate) fn from_raw(matrix: Array2<f64>, s: usize) -> Self {
        Self { matrix, s }
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn k(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_points(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Per-point inlier weights in the `(N - [alpha N])`-capped simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InlierVector {
    values: Array1<f64>,
    alpha: f64,
}

impl InlierVector {
    pub const SUM_TOLERANCE: f64 = 1e-8;

    pub fn new(values: Array1<f64>, alpha: f64) -> Result<Self> {
        let n = values.len();
        let trimmed = outlier_count(alpha, n)?;
        if values
            .iter()
            .any(|&v| !v.is_finite() || !(-Self::SUM_TOLERANCE..=1.0 + Self::SUM_TOLERANCE).contains(&v))
        {
            return Err(Error::InvalidData(
                "inlier weights must lie in [0, 1]".into(),
            ));
        }
        let target = (n - trimmed) as f64;
        let sum = values.sum();
        if (sum - target).abs() > Self::SUM_TOLERANCE {
            return Err(Error::InvalidData(format!(
                "inlier weights sum to {sum}, expected {target}"
            )));
        }
        Ok(Self { values, alpha })
    }

    /// All points fully inlying (`alpha = 0`).
    pub fn ones(n: usize) -> Self {
        Self {
            values: Array1::ones(n),
            alpha: 0.0,
        }
    }

    /// The uniform feasible point `(N - [alpha N]) / N`.
    pub fn uniform(n: usize, alpha: f64) -> Result<Self> {
        let trimmed = outlier_count(alpha, n)?;
        let level = (n - trimmed) as f64 / n as f64;
        Ok(Self {
            values: Array1::from_elem(n, level),
            alpha,
        })
    }

    pub(crate) fn from_raw(values: Array1<f64>, alpha: f64) -> Self {
        Self { values, alpha }
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.values
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `[alpha * n]`: nearest integer, with halves rounded up.
///
/// A `1e-9` guard absorbs representation error so that products meant to be
/// exact halves (e.g. `0.29 * 50`) still round up.
pub fn outlier_count(alpha: f64, n: usize) -> Result<usize> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidConfig(format!(
            "alpha={alpha} must lie in [0, 1)"
        )));
    }
    let count = (alpha * n as f64 + 0.5 + 1e-9).floor() as usize;
    if n > 0 && count >= n {
        return Err(Error::InvalidConfig(format!(
            "alpha={alpha} trims {count} of {n} points, leaving no inliers"
        )));
    }
    Ok(count)
}

/// Everything a fit produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub centers: Centers,
    pub memberships: MembershipMatrix,
    pub inliers: InlierVector,
    /// Sorted cluster indices per point; empty for flagged outliers.
    pub hard_assignments: Vec<Vec<usize>>,
    pub outlier_flags: Vec<bool>,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    /// Final objective value, or `None` if no iteration ran.
    pub fn objective(&self) -> Option<f64> {
        self.objective_trace.last().copied()
    }

    pub fn n_outliers(&self) -> usize {
        self.outlier_flags.iter().filter(|&&f| f).count()
    }
}
