use ndarray::{Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{InitMethod, SolverConfig};
use super::types::{Centers, Dataset};
use crate::error::Result;

/// Offset separating the weight-initialization stream from the center stream.
pub(crate) const WEIGHT_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Picks `k` distinct data columns as starting centers.
pub fn init_centers(data: &Dataset, config: &SolverConfig) -> Result<Centers> {
    config.validate_for(data.n_points())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let indices = match config.init {
        InitMethod::RandomPoints => {
            rand::seq::index::sample(&mut rng, data.n_points(), config.k).into_vec()
        }
        InitMethod::KMeansPlusPlus => kmeans_plus_plus(data.points(), config.k, &mut rng),
    };
    Centers::new(data.points().select(Axis(1), &indices))
}

fn kmeans_plus_plus(points: &Array2<f64>, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let n = points.ncols();
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    let mut nearest = vec![f64::INFINITY; n];

    let mut next = rng.random_range(0..n);
    loop {
        chosen.push(next);
        taken[next] = true;
        if chosen.len() == k {
            break;
        }
        let c = points.column(next);
        for (i, d) in nearest.iter_mut().enumerate() {
            let dist: f64 = points
                .column(i)
                .iter()
                .zip(c.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if dist < *d {
                *d = dist;
            }
        }

        let total: f64 = (0..n).filter(|&i| !taken[i]).map(|i| nearest[i]).sum();
        next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for i in (0..n).filter(|&i| !taken[i]) {
                acc += nearest[i];
                if nearest[i] > 0.0 && acc > target {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave `target` just above the running sum.
            pick.unwrap_or_else(|| {
                (0..n)
                    .rev()
                    .find(|&i| !taken[i] && nearest[i] > 0.0)
                    .expect("positive total implies a positive entry")
            })
        } else {
            // Every remaining point duplicates a chosen one.
            let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
            free[rng.random_range(0..free.len())]
        };
    }
    chosen
}
