use ndarray::Array2;

/// Sets every center to the mean of the points weighted by `weights[j, i]`
/// (times `inliers[i]` when given). A center whose total weight is zero is
/// left where it is.
pub(crate) fn update_centers(
    points: &Array2<f64>,
    weights: &Array2<f64>,
    inliers: Option<&[f64]>,
    centers: &mut Array2<f64>,
) {
    let (m, n) = points.dim();
    let k = centers.ncols();
    let mut numer = vec![0.0; m];
    for j in 0..k {
        numer.fill(0.0);
        let mut denom = 0.0;
        for i in 0..n {
            let a = match inliers {
                Some(v) => v[i] * weights[[j, i]],
                None => weights[[j, i]],
            };
            if a == 0.0 {
                continue;
            }
            denom += a;
            for (f, acc) in numer.iter_mut().enumerate() {
                *acc += a * points[[f, i]];
            }
        }
        if denom > 0.0 {
            for (f, acc) in numer.iter().enumerate() {
                centers[[f, j]] = acc / denom;
            }
        }
    }
}

/// Index of the nearest center per point, ties to the lowest index.
pub(crate) fn nearest_labels(dist: &Array2<f64>) -> Vec<usize> {
    dist.columns()
        .into_iter()
        .map(|col| {
            let mut best = 0;
            for (j, &d) in col.iter().enumerate() {
                if d < col[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}
