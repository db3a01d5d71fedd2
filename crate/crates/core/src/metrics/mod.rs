//! Evaluation measures: average F1 over an optimal one-to-one matching of
//! predicted to true clusters, and `M_e`, the ROC-plane distance of an
//! outlier classifier from the perfect one.

mod assignment;

pub use assignment::max_weight_assignment;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{Dataset, FitResult};

/// A (possibly overlapping) clustering of `n` points plus an outlier set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    n: usize,
    clusters: Vec<Vec<usize>>,
    outliers: Vec<usize>,
}

impl Clustering {
    /// Builds a clustering from member lists. Indices must be below `n`.
    pub fn new(n: usize, clusters: Vec<Vec<usize>>, outliers: Vec<usize>) -> Result<Self> {
        let check = |set: &[usize]| {
            set.iter().find(|&&i| i >= n).map_or(Ok(()), |&i| {
                Err(Error::InvalidData(format!(
                    "point index {i} out of range for {n} points"
                )))
            })
        };
        for c in &clusters {
            check(c)?;
        }
        check(&outliers)?;
        let normalize = |mut v: Vec<usize>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        Ok(Self {
            n,
            clusters: clusters.into_iter().map(normalize).collect(),
            outliers: normalize(outliers),
        })
    }

    /// Builds a clustering from per-point assignment sets and outlier flags.
    /// `k` fixes the number of clusters; otherwise it is the largest label + 1.
    pub fn from_assignments(
        assignments: &[Vec<usize>],
        outlier_flags: &[bool],
        k: Option<usize>,
    ) -> Result<Self> {
        let n = assignments.len();
        if outlier_flags.len() != n {
            return Err(Error::DimensionMismatch {
                what: "outlier flags",
                expected: n,
                got: outlier_flags.len(),
            });
        }
        let max_label = assignments.iter().flatten().max().map_or(0, |&j| j + 1);
        let k = k.unwrap_or(max_label);
        if max_label > k {
            return Err(Error::InvalidData(format!(
                "cluster label {} out of range for k={k}",
                max_label - 1
            )));
        }
        let mut clusters = vec![Vec::new(); k];
        for (i, set) in assignments.iter().enumerate() {
            for &j in set {
                clusters[j].push(i);
            }
        }
        let outliers = (0..n).filter(|&i| outlier_flags[i]).collect();
        Self::new(n, clusters, outliers)
    }

    /// The predicted clustering of a fit.
    pub fn from_fit(fit: &FitResult) -> Result<Self> {
        Self::from_assignments(
            &fit.hard_assignments,
            &fit.outlier_flags,
            Some(fit.centers.k()),
        )
    }

    /// The ground-truth clustering of a dataset.
    pub fn from_truth(data: &Dataset) -> Result<Self> {
        let memberships = data.truth_memberships().ok_or_else(|| {
            Error::InvalidData("dataset carries no ground-truth memberships".into())
        })?;
        let flags = data
            .truth_outliers()
            .map(<[bool]>::to_vec)
            .unwrap_or_else(|| vec![false; data.n_points()]);
        Self::from_assignments(memberships, &flags, data.truth_cluster_count())
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn outliers(&self) -> &[usize] {
        &self.outliers
    }

    pub fn outlier_flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.n];
        for &i in &self.outliers {
            flags[i] = true;
        }
        flags
    }
}

/// `TP / (TP + (FP + FN) / 2)`. With all three counts zero the match is
/// vacuously perfect and the score is 1.
pub fn f1_single(tp: usize, fp: usize, fn_: usize) -> f64 {
    if tp + fp + fn_ == 0 {
        return 1.0;
    }
    tp as f64 / (tp as f64 + 0.5 * (fp + fn_) as f64)
}

fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in set {
        m[i] = true;
    }
    m
}

fn set_f1(predicted: &[bool], truth: &[bool]) -> f64 {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&p, &t) in predicted.iter().zip(truth) {
        match (p, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    f1_single(tp, fp, fn_)
}

/// Pairwise F1 between every truth group (rows) and predicted group
/// (columns). When the truth has outliers, both outlier sets join the
/// groups as one extra cluster each.
pub fn f1_matrix(predicted: &Clustering, truth: &Clustering) -> Result<Vec<Vec<f64>>> {
    if predicted.n != truth.n {
        return Err(Error::DimensionMismatch {
            what: "clustering point count",
            expected: truth.n,
            got: predicted.n,
        });
    }
    let n = truth.n;
    let with_outliers = !truth.outliers.is_empty();
    let groups = |c: &Clustering| {
        let mut g: Vec<Vec<bool>> = c.clusters.iter().map(|s| mask(n, s)).collect();
        if with_outliers {
            g.push(mask(n, &c.outliers));
        }
        g
    };
    let truth_groups = groups(truth);
    if truth_groups.is_empty() || truth_groups.iter().all(|g| !g.contains(&true)) {
        return Err(Error::UndefinedMetric("truth clustering is empty".into()));
    }
    let predicted_groups = groups(predicted);
    Ok(truth_groups
        .iter()
        .map(|t| predicted_groups.iter().map(|p| set_f1(p, t)).collect())
        .collect())
}

/// Mean F1 over truth clusters after matching predicted clusters one-to-one
/// so that the mean is maximal. Truth clusters left unmatched score 0.
pub fn average_f1(predicted: &Clustering, truth: &Clustering) -> Result<f64> {
    let scores = f1_matrix(predicted, truth)?;
    let matching = max_weight_assignment(&scores);
    let total: f64 = matching
        .iter()
        .enumerate()
        .filter_map(|(t, p)| p.map(|p| scores[t][p]))
        .sum();
    Ok(total / scores.len() as f64)
}

/// Outlier confusion counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutlierConfusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl OutlierConfusion {
    pub fn new(predicted: &[bool], truth: &[bool]) -> Result<Self> {
        if predicted.len() != truth.len() {
            return Err(Error::DimensionMismatch {
                what: "outlier flags",
                expected: truth.len(),
                got: predicted.len(),
            });
        }
        let mut c = Self {
            tp: 0,
            fp: 0,
            fn_: 0,
            tn: 0,
        };
        for (&p, &t) in predicted.iter().zip(truth) {
            match (p, t) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        Ok(c)
    }

    pub fn tp_rate(&self) -> Result<f64> {
        if self.tp + self.fn_ == 0 {
            return Err(Error::UndefinedMetric(
                "true-positive rate needs at least one true outlier".into(),
            ));
        }
        Ok(self.tp as f64 / (self.tp + self.fn_) as f64)
    }

    pub fn fp_rate(&self) -> Result<f64> {
        if self.fp + self.tn == 0 {
            return Err(Error::UndefinedMetric(
                "false-positive rate needs at least one true inlier".into(),
            ));
        }
        Ok(self.fp as f64 / (self.fp + self.tn) as f64)
    }
}

/// `sqrt(FP_rate^2 + (1 - TP_rate)^2)`, in `[0, sqrt(2)]`; 0 is perfect.
pub fn me_score(predicted: &[bool], truth: &[bool]) -> Result<f64> {
    let c = OutlierConfusion::new(predicted, truth)?;
    let tpr = c.tp_rate()?;
    let fpr = c.fp_rate()?;
    Ok((fpr * fpr + (1.0 - tpr) * (1.0 - tpr)).sqrt())
}
