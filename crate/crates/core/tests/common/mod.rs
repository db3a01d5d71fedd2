//! Independent reference implementations used only by tests.

#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rtkm::Dataset;

/// Projection onto `{x in [0,1]^n : sum x = s}` by grid refinement.
///
/// The first `n - 1` coordinates are searched on a 13-point-per-axis lattice
/// around the incumbent; the last coordinate is implied by the sum. After
/// each pass the lattice spacing halves.
pub fn grid_projection(y: &[f64], s: usize) -> Vec<f64> {
    let n = y.len();
    let s = s as f64;
    if n == 1 {
        return vec![s];
    }
    let free = n - 1;
    let cost = |x: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    let complete = |head: &[f64]| -> Option<Vec<f64>> {
        if head.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return None;
        }
        let last = s - head.iter().sum::<f64>();
        if !(-1e-12..=1.0 + 1e-12).contains(&last) {
            return None;
        }
        let mut x = head.to_vec();
        x.push(last.clamp(0.0, 1.0));
        Some(x)
    };

    let mut best = vec![s / n as f64; n];
    let mut best_cost = cost(&best);
    let mut h = 1.0 / 6.0;
    const HALF: i32 = 6;
    let offsets: Vec<i32> = (-HALF..=HALF).collect();
    while h > 1e-11 {
        let center = best[..free].to_vec();
        for combo in (0..free).map(|_| offsets.iter()).multi_cartesian_product() {
            let head: Vec<f64> = combo
                .iter()
                .zip(&center)
                .map(|(&&o, &c)| c + o as f64 * h)
                .collect();
            if let Some(x) = complete(&head) {
                let c = cost(&x);
                if c < best_cost {
                    best_cost = c;
                    best = x;
                }
            }
        }
        h *= 0.5;
    }
    best
}

/// Projection onto the same set by enumerating every assignment of
/// coordinates to the lower bound, the upper bound or the free set, and
/// keeping the feasible candidate of least cost.
pub fn active_set_projection(y: &[f64], s: usize) -> Vec<f64> {
    let n = y.len();
    let s = s as f64;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for pattern in (0..n).map(|_| 0..3u8).multi_cartesian_product() {
        let uppers = pattern.iter().filter(|&&p| p == 1).count() as f64;
        let free: Vec<usize> = (0..n).filter(|&i| pattern[i] == 2).collect();
        let mut x = vec![0.0; n];
        for i in 0..n {
            if pattern[i] == 1 {
                x[i] = 1.0;
            }
        }
        if free.is_empty() {
            if (uppers - s).abs() > 1e-12 {
                continue;
            }
        } else {
            let tau = (free.iter().map(|&i| y[i]).sum::<f64>() - (s - uppers)) / free.len() as f64;
            let mut ok = true;
            for &i in &free {
                let v = y[i] - tau;
                if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                    ok = false;
                }
                x[i] = v.clamp(0.0, 1.0);
            }
            if !ok {
                continue;
            }
        }
        let c: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
            best = Some((c, x));
        }
    }
    best.expect("the capped simplex is non-empty").1
}

/// Average F1 over truth groups by trying every injective map from truth
/// groups to predicted groups. Groups are index sets over `0..n`.
pub fn exhaustive_average_f1(n: usize, predicted: &[Vec<usize>], truth: &[Vec<usize>]) -> f64 {
    let member = |g: &[usize]| {
        let mut m = vec![false; n];
        for &i in g {
            m[i] = true;
        }
        m
    };
    let f1 = |p: &[usize], t: &[usize]| {
        let (p, t) = (member(p), member(t));
        let tp = (0..n).filter(|&i| p[i] && t[i]).count() as f64;
        let fp = (0..n).filter(|&i| p[i] && !t[i]).count() as f64;
        let fn_ = (0..n).filter(|&i| !p[i] && t[i]).count() as f64;
        if tp + fp + fn_ == 0.0 {
            1.0
        } else {
            2.0 * tp / (2.0 * tp + fp + fn_)
        }
    };
    // Pad with "unmatched" slots so every truth group can go unmatched.
    let slots: Vec<Option<usize>> = (0..predicted.len())
        .map(Some)
        .chain(std::iter::repeat_n(None, truth.len()))
        .collect();
    let mut best = 0.0f64;
    for perm in slots.iter().permutations(truth.len()) {
        let total: f64 = perm
            .iter()
            .zip(truth)
            .map(|(slot, t)| slot.map_or(0.0, |p| f1(&predicted[p], t)))
            .sum();
        best = best.max(total);
    }
    best / truth.len() as f64
}

/// Gaussian blobs with `k` well-separated centers in `m` dimensions.
pub fn blobs(seed: u64, k: usize, per: usize, m: usize, gap: f64, spread: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(k * per);
    let mut labels = Vec::with_capacity(k * per);
    for c in 0..k {
        let mean: Vec<f64> = (0..m)
            .map(|f| if f == 0 { c as f64 * gap } else { rng.random_range(-0.5..0.5) })
            .collect();
        for _ in 0..per {
            rows.push(
                mean.iter()
                    .map(|mu| mu + spread * (rng.random::<f64>() - 0.5) * 2.0)
                    .collect::<Vec<_>>(),
            );
            labels.push(vec![c]);
        }
    }
    Dataset::from_rows(&rows)
        .unwrap()
        .with_truth(Some(labels), None)
        .unwrap()
}

/// Uniform random points in the unit cube.
pub fn uniform_points(seed: u64, n: usize, m: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    Dataset::from_rows(&rows).unwrap()
}
