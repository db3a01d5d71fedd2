use crate::error::{CliError, CliResult};

const MAX_GRID_POINTS: usize = 10_000;

/// Parses an outlier-fraction grid.
///
/// Accepts comma-separated items, each either a single value (`0.05`) or an
/// inclusive range `start:stop:step` (`0:0.1:0.02`). The result is sorted
/// ascending with duplicates removed; every value must lie in `[0, 1)`.
pub fn parse_alpha_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = |msg: String| CliError::Usage(format!("alpha grid `{text}`: {msg}"));
    let number = |s: &str| -> CliResult<f64> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{}` is not a number", s.trim())))?;
        if !v.is_finite() {
            return Err(bad(format!("`{}` is not finite", s.trim())));
        }
        Ok(v)
    };

    let mut values = Vec::new();
    for item in text.split(',') {
        if item.trim().is_empty() {
            return Err(bad("empty item".into()));
        }
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => values.push(number(v)?),
            [start, stop, step] => {
                let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
                if step <= 0.0 {
                    return Err(bad("range step must be positive".into()));
                }
                if stop < start {
                    return Err(bad("range stop is below its start".into()));
                }
                let steps = ((stop - start) / step + 1e-9).floor();
                if steps >= MAX_GRID_POINTS as f64 {
                    return Err(bad(format!("range has more than {MAX_GRID_POINTS} points")));
                }
                let count = steps as usize + 1;
                for i in 0..count {
                    let v = start + i as f64 * step;
                    // Snap so 0:0.1:0.02 yields 0.06, not 0.060000000000000005.
                    values.push((v * 1e12).round() / 1e12);
                }
            }
            _ => return Err(bad(format!("`{item}` is neither a value nor start:stop:step"))),
        }
        if values.len() > MAX_GRID_POINTS {
            return Err(bad(format!("more than {MAX_GRID_POINTS} points")));
        }
    }
    if let Some(v) = values.iter().find(|v| !(0.0..1.0).contains(*v)) {
        return Err(bad(format!("{v} is outside [0, 1)")));
    }
    values.sort_by(f64::total_cmp);
    values.dedup();
    Ok(values)
}
