use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How initial centers are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InitMethod {
    /// `k` distinct data points drawn uniformly.
    #[default]
    RandomPoints,
    /// Squared-distance-proportional seeding.
    KMeansPlusPlus,
}

impl FromStr for InitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-points" | "random" => Ok(Self::RandomPoints),
            "kmeans++" | "kmeans-plus-plus" => Ok(Self::KMeansPlusPlus),
            other => Err(Error::InvalidConfig(format!("unknown init method `{other}`"))),
        }
    }
}

impl fmt::Display for InitMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RandomPoints => "random-points",
            Self::KMeansPlusPlus => "kmeans++",
        })
    }
}

/// Starting point of the membership matrix for the relaxed solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WeightInit {
    /// Every column equal to `s / k`.
    #[default]
    Uniform,
    /// Seeded random vectors projected onto the `s`-capped simplex.
    Random,
    /// Vertex columns: the `s` nearest initial centers get weight one.
    Nearest,
}

impl FromStr for WeightInit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "random" => Ok(Self::Random),
            "nearest" => Ok(Self::Nearest),
            other => Err(Error::InvalidConfig(format!(
                "unknown weight init `{other}`"
            ))),
        }
    }
}

impl fmt::Display for WeightInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::Random => "random",
            Self::Nearest => "nearest",
        })
    }
}

/// The four clustering algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    KMeans,
    Relaxed,
    Rtkm,
    Trimmed,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmeans" => Ok(Self::KMeans),
            "relaxed" => Ok(Self::Relaxed),
            "rtkm" => Ok(Self::Rtkm),
            "trimmed" => Ok(Self::Trimmed),
            other => Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::KMeans => "kmeans",
            Self::Relaxed => "relaxed",
            Self::Rtkm => "rtkm",
            Self::Trimmed => "trimmed",
        })
    }
}

/// Parameters shared by all solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub k: usize,
    /// Minimum number of clusters per point (membership mass).
    pub s: usize,
    /// Expected fraction of outliers.
    pub alpha: f64,
    /// Proximal step for the membership update; must exceed 1.
    pub step_d: f64,
    /// Proximal step for the inlier update; must exceed 1.
    pub step_e: f64,
    pub max_iters: usize,
    /// Relative objective change below which iteration stops.
    pub tol: f64,
    pub seed: u64,
    pub init: InitMethod,
    pub weight_init: WeightInit,
    /// Weights above this count as membership when `s > 1`.
    pub support_threshold: f64,
}

impl SolverConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            ..Self::default()
        }
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_init(mut self, init: InitMethod) -> Self {
        self.init = init;
        self
    }

    pub fn with_weight_init(mut self, weight_init: WeightInit) -> Self {
        self.weight_init = weight_init;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_steps(mut self, step_d: f64, step_e: f64) -> Self {
        self.step_d = step_d;
        self.step_e = step_e;
        self
    }

    /// Checks the configuration on its own, independent of any dataset.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".into()));
        }
        if self.s == 0 || self.s > self.k {
            return Err(Error::InvalidConfig(format!(
                "s={} must satisfy 1 <= s <= k={}",
                self.s, self.k
            )));
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::InvalidConfig(format!(
                "alpha={} must lie in [0, 1)",
                self.alpha
            )));
        }
        // NaN fails both comparisons.
        if !(self.step_d > 1.0 && self.step_d.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "step_d={} must be finite and > 1",
                self.step_d
            )));
        }
        if !(self.step_e > 1.0 && self.step_e.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "step_e={} must be finite and > 1",
                self.step_e
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive".into()));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tol={} must be finite and non-negative",
                self.tol
            )));
        }
        if !(self.support_threshold >= 0.0 && self.support_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "support_threshold={} must lie in [0, 1)",
                self.support_threshold
            )));
        }
        Ok(())
    }

    /// Checks the configuration against a dataset of `n` points.
    pub(crate) fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if self.k > n {
            return Err(Error::TooFewPoints { k: self.k, n });
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k: 2,
            s: 1,
            alpha: 0.0,
            step_d: 1.1,
            step_e: 1.1,
            max_iters: 500,
            tol: 1e-8,
            seed: 0,
            init: InitMethod::RandomPoints,
            weight_init: WeightInit::Uniform,
            support_threshold: 1e-6,
        }
    }
}
