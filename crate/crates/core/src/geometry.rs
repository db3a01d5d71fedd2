//! Euclidean projection onto capped simplices.
//!
//! The capped simplex of dimension `n` and mass `s` is the set
//! `{w in [0,1]^n : sum(w) = s}`. Its projection has the closed form
//! `w = clip(y - tau, 0, 1)` where `tau` solves `sum(clip(y_j - tau, 0, 1)) = s`.
//! The left-hand side is a nonincreasing piecewise-linear function of `tau`
//! with breakpoints at `y_j - 1` and `y_j`, so `tau` is found exactly by
//! sorting the breakpoints and scanning the linear pieces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The set `{w in [0,1]^dim : sum(w) = mass}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CappedSimplex {
    dim: usize,
    mass: f64,
}

impl CappedSimplex {
    pub fn new(dim: usize, mass: f64) -> Result<Self> {
        if !mass.is_finite() {
            return Err(Error::NonFinite {
                what: "capped simplex mass",
            });
        }
        if dim == 0 || mass < 0.0 || mass > dim as f64 {
            return Err(Error::InfeasibleSimplex { mass, dim });
        }
        Ok(Self { dim, mass })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Returns the Euclidean projection of `y` onto this set.
    pub fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; y.len()];
        self.project_into(y, &mut out)?;
        Ok(out)
    }

    /// Projects `y` and writes the result into `out`.
    pub fn project_into(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                what: "capped simplex projection input",
                expected: self.dim,
                got: y.len(),
            });
        }
        if out.len() != self.dim {
            return Err(Error::DimensionMismatch {
                what: "capped simplex projection output",
                expected: self.dim,
                got: out.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "capped simplex projection input",
            });
        }

        if self.mass == 0.0 {
            out.fill(0.0);
            return Ok(());
        }
        if self.mass == self.dim as f64 {
            out.fill(1.0);
            return Ok(());
        }

        let tau = self.threshold(y);
        for (o, &v) in out.iter_mut().zip(y) {
            *o = (v - tau).clamp(0.0, 1.0);
        }
        Ok(())
    }

    /// Solves `sum(clip(y_j - tau, 0, 1)) = mass` for `tau`, assuming
    /// `0 < mass < dim` and finite `y`.
    fn threshold(&self, y: &[f64]) -> f64 {
        // (position, change in the number of coordinates strictly inside (0, 1))
        let mut breakpoints: Vec<(f64, i64)> = Vec::with_capacity(2 * y.len());
        for &v in y {
            breakpoints.push((v - 1.0, 1));
            breakpoints.push((v, -1));
        }
        breakpoints.sort_by(|a, b| a.0.total_cmp(&b.0));

        // Left of the first breakpoint every coordinate sits at 1.
        let mut level = self.dim as f64;
        let mut active: i64 = 0;
        let mut prev = breakpoints[0].0;
        let mut tau = breakpoints[breakpoints.len() - 1].0;
        for &(point, delta) in &breakpoints {
            let next_level = level - active as f64 * (point - prev);
            if next_level <= self.mass {
                tau = if active > 0 {
                    prev + (level - self.mass) / active as f64
                } else {
                    prev
                };
                break;
            }
            level = next_level;
            prev = point;
            active += delta;
        }

        // Recompute tau from the free coordinates alone; this keeps the
        // coordinate sum accurate when |y| is large.
        let mut free_sum = 0.0;
        let mut free = 0usize;
        let mut ones = 0usize;
        for &v in y {
            let shifted = v - tau;
            if shifted >= 1.0 {
                ones += 1;
            } else if shifted > 0.0 {
                free_sum += v;
                free += 1;
            }
        }
        if free > 0 {
            tau = (free_sum - (self.mass - ones as f64)) / free as f64;
        }
        tau
    }
}

/// Projects `y` onto the capped simplex `spec`.
pub fn project_capped_simplex(y: &[f64], spec: &CappedSimplex) -> Result<Vec<f64>> {
    spec.project(y)
}
