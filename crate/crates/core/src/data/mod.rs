//! Dataset ingestion, ground-truth mapping, synthetic generation and noise
//! injection.

mod synth;
mod table;

pub use synth::{generate_synthetic, inject_noise, SynthSpec};
pub use table::{
    load_csv, InvalidRowPolicy, LabelSpec, LabeledTable, LoadOptions, TableMeta,
};

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::Dataset;

/// Treatment of records labelled with both inlier and outlier classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum MixedLabelPolicy {
    /// Keep the record as an inlier with its inlier labels only.
    #[default]
    Inlier,
    Outlier,
    Reject,
}

/// Converts a table into a dataset whose truth clusters are the inlier
/// classes (renumbered in order) and whose truth outliers are the records
/// labelled only with classes in `outlier_classes`.
pub fn to_dataset(
    table: &LabeledTable,
    outlier_classes: &[usize],
    policy: MixedLabelPolicy,
) -> Result<Dataset> {
    let n_classes = table.class_names.len();
    if let Some(&c) = outlier_classes.iter().find(|&&c| c >= n_classes) {
        return Err(Error::InvalidConfig(format!(
            "outlier class {c} out of range for {n_classes} classes"
        )));
    }
    let data = Dataset::from_rows(&table.rows)?;
    if n_classes == 0 {
        return Ok(data);
    }

    let is_outlier_class: Vec<bool> = (0..n_classes).map(|c| outlier_classes.contains(&c)).collect();
    let mut remap = vec![None; n_classes];
    let mut next = 0;
    for c in 0..n_classes {
        if !is_outlier_class[c] {
            remap[c] = Some(next);
            next += 1;
        }
    }
    if next == 0 {
        return Err(Error::InvalidConfig(
            "every class is marked as outlier; no inlier clusters remain".into(),
        ));
    }

    let mut memberships = Vec::with_capacity(table.labels.len());
    let mut outliers = Vec::with_capacity(table.labels.len());
    let mut mixed = 0usize;
    for (i, labels) in table.labels.iter().enumerate() {
        let inlier: Vec<usize> = labels.iter().filter_map(|&c| remap[c]).collect();
        let has_outlier = labels.iter().any(|&c| is_outlier_class[c]);
        let outlier = match (has_outlier, inlier.is_empty()) {
            (false, _) => false,
            (true, true) => true,
            (true, false) => {
                mixed += 1;
                match policy {
                    MixedLabelPolicy::Inlier => false,
                    MixedLabelPolicy::Outlier => true,
                    MixedLabelPolicy::Reject => {
                        return Err(Error::InvalidData(format!(
                            "record {i} mixes inlier and outlier classes"
                        )))
                    }
                }
            }
        };
        memberships.push(if outlier { Vec::new() } else { inlier });
        outliers.push(outlier);
    }
    if mixed > 0 {
        warn!("{mixed} records carry both inlier and outlier classes; applied {policy:?} policy");
    }
    data.with_truth(Some(memberships), Some(outliers))
}
