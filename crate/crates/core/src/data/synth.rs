use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::Dataset;

const MAX_OUTLIER_DRAWS: usize = 100_000;

/// Isotropic Gaussian blobs plus uniformly placed outliers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub means: Vec<Vec<f64>>,
    /// Standard deviation per cluster.
    pub spreads: Vec<f64>,
    /// Points per cluster.
    pub sizes: Vec<usize>,
    pub outliers: usize,
    pub outlier_low: Vec<f64>,
    pub outlier_high: Vec<f64>,
    /// Outliers are redrawn until at least this far from every mean.
    pub min_outlier_distance: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// Three well-separated planar clusters of 50 points and two distant
    /// outliers: the configuration on which plain k-means wastes a center.
    /// Coordinates are unit scale so that squared distances are comparable
    /// to the default proximal steps.
    pub fn three_clusters_two_outliers(seed: u64) -> Self {
        Self {
            means: vec![vec![0.0, 0.0], vec![0.6, 0.0], vec![0.3, 0.5]],
            spreads: vec![0.07; 3],
            sizes: vec![50; 3],
            outliers: 2,
            outlier_low: vec![-4.0, -4.0],
            outlier_high: vec![4.0, 4.0],
            min_outlier_distance: 2.5,
            seed,
        }
    }

    pub fn dim(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }

    pub fn n_points(&self) -> usize {
        self.sizes.iter().sum::<usize>() + self.outliers
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let k = self.means.len();
        let m = self.dim();
        if k == 0 || m == 0 {
            return bad("synthetic spec needs at least one cluster and one feature".into());
        }
        if self.spreads.len() != k || self.sizes.len() != k {
            return bad(format!(
                "spreads ({}) and sizes ({}) must match the {k} means",
                self.spreads.len(),
                self.sizes.len()
            ));
        }
        if self.means.iter().any(|mu| mu.len() != m || mu.iter().any(|v| !v.is_finite())) {
            return bad("all means must be finite with the same dimension".into());
        }
        if self.spreads.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return bad("spreads must be finite and non-negative".into());
        }
        if self.sizes.contains(&0) {
            return bad("every cluster needs at least one point".into());
        }
        if self.outlier_low.len() != m || self.outlier_high.len() != m {
            return bad(format!("outlier box must have dimension {m}"));
        }
        let contains = self.means.iter().all(|mu| {
            mu.iter()
                .zip(self.outlier_low.iter().zip(&self.outlier_high))
                .all(|(v, (lo, hi))| lo < v && v < hi)
        });
        if !contains {
            return bad("outlier box must strictly contain every cluster mean".into());
        }
        if !(self.min_outlier_distance.is_finite() && self.min_outlier_distance >= 0.0) {
            return bad("min_outlier_distance must be finite and non-negative".into());
        }
        Ok(())
    }
}

/// Draws the blobs in cluster order followed by the outliers. Truth
/// memberships name the generating cluster; outliers have none.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<Dataset> {
    spec.validate()?;
    let m = spec.dim();
    let n = spec.n_points();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Array2::zeros((m, n));
    let mut memberships = Vec::with_capacity(n);
    let mut col = 0;
    for (c, (mean, (&spread, &size))) in spec
        .means
        .iter()
        .zip(spec.spreads.iter().zip(&spec.sizes))
        .enumerate()
    {
        for _ in 0..size {
            for f in 0..m {
                let z: f64 = StandardNormal.sample(&mut rng);
                points[[f, col]] = mean[f] + spread * z;
            }
            memberships.push(vec![c]);
            col += 1;
        }
    }
    for _ in 0..spec.outliers {
        let mut draws = 0;
        loop {
            let candidate: Vec<f64> = (0..m)
                .map(|f| rng.random_range(spec.outlier_low[f]..spec.outlier_high[f]))
                .collect();
            let far = spec.means.iter().all(|mu| {
                let d2: f64 = mu.iter().zip(&candidate).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.sqrt() >= spec.min_outlier_distance
            });
            if far {
                for f in 0..m {
                    points[[f, col]] = candidate[f];
                }
                break;
            }
            draws += 1;
            if draws >= MAX_OUTLIER_DRAWS {
                return Err(Error::InvalidConfig(
                    "could not place an outlier at the requested distance inside the box".into(),
                ));
            }
        }
        memberships.push(Vec::new());
        col += 1;
    }
    let mut flags = vec![false; n];
    flags[n - spec.outliers..].fill(true);
    Dataset::new(points)?.with_truth(Some(memberships), Some(flags))
}

/// Appends `count` points drawn uniformly from the per-feature bounding box
/// of `data`, flagged as truth outliers with no memberships. The original
/// points and their truth are left untouched.
pub fn inject_noise(data: &Dataset, count: usize, seed: u64) -> Result<Dataset> {
    if count == 0 {
        return Ok(data.clone());
    }
    let n = data.n_points();
    let bounds: Vec<(f64, f64)> = data
        .points()
        .rows()
        .into_iter()
        .map(|row| {
            row.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = Array2::zeros((data.n_features(), count));
    for i in 0..count {
        for (f, &(lo, hi)) in bounds.iter().enumerate() {
            let u: f64 = rng.random();
            noise[[f, i]] = if hi > lo { lo + (hi - lo) * u } else { lo };
        }
    }

    let (points, memberships, outliers) = data.clone().into_parts();
    let mut all = points;
    all.append(Axis(1), noise.view())
        .expect("noise has the same feature count");
    let memberships = memberships.map(|mut ms| {
        ms.extend(std::iter::repeat_n(Vec::new(), count));
        ms
    });
    let mut flags = outliers.unwrap_or_else(|| vec![false; n]);
    flags.extend(std::iter::repeat_n(true, count));
    Dataset::new(all)?.with_truth(memberships, Some(flags))
}
