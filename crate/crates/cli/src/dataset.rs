use std::fs;
use std::path::PathBuf;

use clap::Args;
use rtkm::data::{
    generate_synthetic, inject_noise, to_dataset, InvalidRowPolicy, LabelSpec, LabeledTable,
    LoadOptions, MixedLabelPolicy, SynthSpec,
};
use rtkm::Dataset;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Where the points come from and how they are prepared.
#[derive(Debug, Clone, Args)]
pub struct DatasetArgs {
    /// CSV file of records (comma-delimited, `#` comments).
    #[arg(long, value_name = "PATH", conflicts_with = "synthetic")]
    pub data: Option<PathBuf>,
    /// The CSV file has no header row.
    #[arg(long)]
    pub no_header: bool,
    /// Label columns: none, class:COL, class:last, indicators:A-B or last:N.
    #[arg(long, default_value = "none")]
    pub labels: String,
    /// Classes treated as ground-truth outliers, by name or index.
    #[arg(long, value_delimiter = ',', value_name = "CLASSES")]
    pub outlier_classes: Vec<String>,
    /// Records labelled with both inlier and outlier classes.
    #[arg(long, value_enum, default_value_t = MixedLabels::Inlier)]
    pub mixed_labels: MixedLabels,
    /// Drop records whose features do not parse instead of failing.
    #[arg(long)]
    pub skip_invalid: bool,
    /// Built-in synthetic scenario instead of a file.
    #[arg(long, value_enum)]
    pub synthetic: Option<Preset>,
    /// Seed of the synthetic generator.
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
    /// Uniform noise points appended as ground-truth outliers.
    #[arg(long, default_value_t = 0)]
    pub noise: usize,
    #[arg(long, default_value_t = 0)]
    pub noise_seed: u64,
    /// Z-score every feature before clustering.
    #[arg(long)]
    pub standardize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Three planar Gaussian clusters of 50 points and two far outliers.
    ThreeClusters,
}

impl Preset {
    pub fn spec(self, seed: u64) -> SynthSpec {
        match self {
            Self::ThreeClusters => SynthSpec::three_clusters_two_outliers(seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MixedLabels {
    Inlier,
    Outlier,
    Reject,
}

impl From<MixedLabels> for MixedLabelPolicy {
    fn from(m: MixedLabels) -> Self {
        match m {
            MixedLabels::Inlier => Self::Inlier,
            MixedLabels::Outlier => Self::Outlier,
            MixedLabels::Reject => Self::Reject,
        }
    }
}

/// Enough to rebuild the dataset exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetIdentity {
    pub source: DataSource,
    pub noise: usize,
    pub noise_seed: u64,
    pub standardize: bool,
    pub n_points: usize,
    pub n_features: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataSource {
    File {
        path: PathBuf,
        sha256: String,
        has_header: bool,
        labels: String,
        outlier_classes: Vec<String>,
        mixed_labels: MixedLabels,
        skip_invalid: bool,
    },
    Synthetic {
        preset: Preset,
        spec: SynthSpec,
    },
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn resolve_classes(table: &LabeledTable, names: &[String]) -> CliResult<Vec<usize>> {
    names
        .iter()
        .map(|name| {
            let name = name.trim();
            table
                .class_index(name)
                .or_else(|| name.parse::<usize>().ok().filter(|&i| i < table.class_names.len()))
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown outlier class `{name}`; classes are {:?}",
                        table.class_names
                    ))
                })
        })
        .collect()
}

fn load_file(
    path: &PathBuf,
    has_header: bool,
    labels: &str,
    outlier_classes: &[String],
    mixed: MixedLabels,
    skip_invalid: bool,
) -> CliResult<(Dataset, String)> {
    let labels: LabelSpec = labels.parse().map_err(|e: rtkm::Error| CliError::Usage(e.to_string()))?;
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    let options = LoadOptions {
        has_header,
        labels: labels.clone(),
        features: None,
        invalid_rows: if skip_invalid {
            InvalidRowPolicy::Skip
        } else {
            InvalidRowPolicy::Reject
        },
    };
    let table = LabeledTable::from_reader(bytes.as_slice(), &options)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if !table.skipped_rows.is_empty() {
        log::warn!(
            "skipped {} unparseable records in {}",
            table.skipped_rows.len(),
            path.display()
        );
    }
    if table.rows.is_empty() {
        return Err(CliError::Data(format!("{} holds no records", path.display())));
    }
    if labels == LabelSpec::None && !outlier_classes.is_empty() {
        return Err(CliError::Usage("--outlier-classes needs --labels".into()));
    }
    let outliers = resolve_classes(&table, outlier_classes)?;
    let data = to_dataset(&table, &outliers, mixed.into())?;
    Ok((data, sha256_hex(&bytes)))
}

fn finish(
    data: Dataset,
    source: DataSource,
    noise: usize,
    noise_seed: u64,
    standardize: bool,
) -> CliResult<(Dataset, DatasetIdentity)> {
    let data = inject_noise(&data, noise, noise_seed)?;
    let data = if standardize { data.standardized() } else { data };
    let identity = DatasetIdentity {
        source,
        noise,
        noise_seed,
        standardize,
        n_points: data.n_points(),
        n_features: data.n_features(),
    };
    Ok((data, identity))
}

impl DatasetArgs {
    pub fn load(&self) -> CliResult<(Dataset, DatasetIdentity)> {
        let (data, source) = match (&self.data, self.synthetic) {
            (Some(path), None) => {
                let (data, sha256) = load_file(
                    path,
                    !self.no_header,
                    &self.labels,
                    &self.outlier_classes,
                    self.mixed_labels,
                    self.skip_invalid,
                )?;
                let source = DataSource::File {
                    path: path.clone(),
                    sha256,
                    has_header: !self.no_header,
                    labels: self.labels.clone(),
                    outlier_classes: self.outlier_classes.clone(),
                    mixed_labels: self.mixed_labels,
                    skip_invalid: self.skip_invalid,
                };
                (data, source)
            }
            (None, Some(preset)) => {
                let spec = preset.spec(self.data_seed);
                (generate_synthetic(&spec)?, DataSource::Synthetic { preset, spec })
            }
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --data or --synthetic".into(),
                ))
            }
        };
        finish(data, source, self.noise, self.noise_seed, self.standardize)
    }
}

impl DatasetIdentity {
    /// Rebuilds the dataset, checking that a source file is unchanged.
    pub fn reload(&self) -> CliResult<Dataset> {
        let data = match &self.source {
            DataSource::File {
                path,
                sha256,
                has_header,
                labels,
                outlier_classes,
                mixed_labels,
                skip_invalid,
            } => {
                let (data, digest) = load_file(
                    path,
                    *has_header,
                    labels,
                    outlier_classes,
                    *mixed_labels,
                    *skip_invalid,
                )?;
                if &digest != sha256 {
                    return Err(CliError::Data(format!(
                        "{} changed since the run (sha256 {digest}, recorded {sha256})",
                        path.display()
                    )));
                }
                data
            }
            DataSource::Synthetic { spec, .. } => generate_synthetic(spec)?,
        };
        let (data, identity) =
            finish(data, self.source.clone(), self.noise, self.noise_seed, self.standardize)?;
        if identity != *self {
            return Err(CliError::Data("rebuilt dataset does not match the manifest".into()));
        }
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args() -> DatasetArgs {
        DatasetArgs {
            data: None,
            no_header: false,
            labels: "none".into(),
            outlier_classes: vec![],
            mixed_labels: MixedLabels::Inlier,
            skip_invalid: false,
            synthetic: Some(Preset::ThreeClusters),
            data_seed: 3,
            noise: 4,
            noise_seed: 1,
            standardize: true,
        }
    }

    #[test]
    fn synthetic_identity_reloads() {
        let (data, identity) = args().load().unwrap();
        assert_eq!(identity.n_points, 156);
        assert_eq!(identity.reload().unwrap(), data);
    }

    #[test]
    fn needs_exactly_one_source() {
        let mut a = args();
        a.synthetic = None;
        assert!(matches!(a.load(), Err(CliError::Usage(_))));
    }

    #[test]
    fn digest_is_hex_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
