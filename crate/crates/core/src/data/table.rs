use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which columns of a delimited file carry class labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum LabelSpec {
    /// No labels; every column is a feature.
    #[default]
    None,
    /// One column holding a class value per record.
    ClassColumn(usize),
    /// The last column holds a class value per record.
    LastClassColumn,
    /// An inclusive block of 0/1 indicator columns, one per class.
    Indicators { first: usize, last: usize },
    /// The trailing `n` columns are 0/1 indicators.
    TrailingIndicators(usize),
}

impl FromStr for LabelSpec {
    type Err = Error;

    /// Accepts `none`, `class:COL`, `class:last`, `indicators:A-B` and `last:N`
    /// (column indices are 0-based).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("invalid label spec `{s}`"));
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| bad());
        let s_trim = s.trim();
        if s_trim == "none" {
            return Ok(Self::None);
        }
        let (kind, arg) = s_trim.split_once(':').ok_or_else(bad)?;
        match kind.trim() {
            "class" if arg.trim() == "last" => Ok(Self::LastClassColumn),
            "class" => Ok(Self::ClassColumn(parse(arg)?)),
            "last" => match parse(arg)? {
                0 => Err(bad()),
                n => Ok(Self::TrailingIndicators(n)),
            },
            "indicators" => {
                let (a, b) = arg.split_once('-').ok_or_else(bad)?;
                let (first, last) = (parse(a)?, parse(b)?);
                if first > last {
                    return Err(bad());
                }
                Ok(Self::Indicators { first, last })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for LabelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => write!(f, "none"),
            Self::ClassColumn(c) => write!(f, "class:{c}"),
            Self::LastClassColumn => write!(f, "class:last"),
            Self::Indicators { first, last } => write!(f, "indicators:{first}-{last}"),
            Self::TrailingIndicators(n) => write!(f, "last:{n}"),
        }
    }
}

/// What to do with a record whose features do not parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum InvalidRowPolicy {
    #[default]
    Reject,
    /// Drop the record and remember its line number.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadOptions {
    pub has_header: bool,
    pub labels: LabelSpec,
    /// Explicit feature columns; by default every non-label column.
    pub features: Option<Vec<usize>>,
    pub invalid_rows: InvalidRowPolicy,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            has_header: true,
            labels: LabelSpec::None,
            features: None,
            invalid_rows: InvalidRowPolicy::Reject,
        }
    }
}

/// Summary counts of a table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub n_records: usize,
    pub n_features: usize,
    pub n_classes: usize,
    /// Mean number of labels per record.
    pub cardinality: f64,
}

/// Numeric records with per-record label sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledTable {
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Sorted class indices per record.
    pub labels: Vec<Vec<usize>>,
    /// 1-based line numbers of records dropped under [`InvalidRowPolicy::Skip`].
    pub skipped_rows: Vec<usize>,
}

enum Layout {
    None,
    Class(usize),
    Indicators(Vec<usize>),
}

fn parse_number(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Sort key for class values: numeric when every value is numeric.
fn sort_class_names(names: &mut [String]) {
    if names.iter().all(|n| parse_number(n).is_some()) {
        names.sort_by(|a, b| {
            parse_number(a)
                .unwrap_or(0.0)
                .total_cmp(&parse_number(b).unwrap_or(0.0))
                .then_with(|| a.cmp(b))
        });
    } else {
        names.sort();
    }
}

impl LabeledTable {
    pub fn meta(&self) -> TableMeta {
        let n = self.rows.len();
        let total: usize = self.labels.iter().map(Vec::len).sum();
        TableMeta {
            n_records: n,
            n_features: self.feature_names.len(),
            n_classes: self.class_names.len(),
            cardinality: if n == 0 { 0.0 } else { total as f64 / n as f64 },
        }
    }

    /// Index of the class called `name`.
    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }

    /// Parses comma-delimited text.
    pub fn from_reader<R: Read>(reader: R, options: &LoadOptions) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .from_reader(reader);

        let mut records = Vec::new();
        for result in rdr.records() {
            let record = result.map_err(|e| Error::Parse {
                row: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let fields: Vec<String> = record.iter().map(|f| f.trim().to_string()).collect();
            records.push((line, fields));
        }

        let mut records = records.into_iter();
        let header = if options.has_header {
            Some(records.next().ok_or_else(|| {
                Error::InvalidData("file is empty; expected a header row".into())
            })?)
        } else {
            None
        };
        let records: Vec<(usize, Vec<String>)> = records.collect();
        let width = match (&header, records.first()) {
            (Some((_, h)), _) => h.len(),
            (None, Some((_, r))) => r.len(),
            (None, None) => return Err(Error::InvalidData("file has no records".into())),
        };
        if let Some((line, r)) = records.iter().find(|(_, r)| r.len() != width) {
            return Err(Error::Parse {
                row: *line,
                msg: format!("expected {width} fields, found {}", r.len()),
            });
        }

        let out_of_range = |col: usize| {
            Error::InvalidConfig(format!(
                "label column {col} out of range for {width} columns"
            ))
        };
        let layout = match options.labels {
            LabelSpec::None => Layout::None,
            LabelSpec::ClassColumn(c) if c < width => Layout::Class(c),
            LabelSpec::ClassColumn(c) => return Err(out_of_range(c)),
            LabelSpec::LastClassColumn => Layout::Class(width - 1),
            LabelSpec::Indicators { first, last } if last < width => {
                Layout::Indicators((first..=last).collect())
            }
            LabelSpec::Indicators { last, .. } => return Err(out_of_range(last)),
            LabelSpec::TrailingIndicators(n) if n <= width => {
                Layout::Indicators((width - n..width).collect())
            }
            LabelSpec::TrailingIndicators(n) => return Err(out_of_range(n)),
        };
        let label_cols: Vec<usize> = match &layout {
            Layout::None => Vec::new(),
            Layout::Class(c) => vec![*c],
            Layout::Indicators(cols) => cols.clone(),
        };
        let feature_cols: Vec<usize> = match &options.features {
            Some(cols) => {
                if let Some(&c) = cols.iter().find(|&&c| c >= width || label_cols.contains(&c)) {
                    return Err(Error::InvalidConfig(format!(
                        "feature column {c} is out of range or also a label column"
                    )));
                }
                cols.clone()
            }
            None => (0..width).filter(|c| !label_cols.contains(c)).collect(),
        };
        if feature_cols.is_empty() {
            return Err(Error::InvalidConfig("no feature columns selected".into()));
        }

        let feature_names = feature_cols
            .iter()
            .map(|&c| match &header {
                Some((_, h)) => h[c].clone(),
                None => format!("f{c}"),
            })
            .collect();

        let mut kept: Vec<(usize, Vec<f64>, &Vec<String>)> = Vec::with_capacity(records.len());
        let mut skipped_rows = Vec::new();
        for (line, r) in &records {
            let mut features = Vec::with_capacity(feature_cols.len());
            let mut bad = None;
            for &c in &feature_cols {
                match parse_number(&r[c]) {
                    Some(v) => features.push(v),
                    None => {
                        bad = Some(c);
                        break;
                    }
                }
            }
            match (bad, options.invalid_rows) {
                (None, _) => kept.push((*line, features, r)),
                (Some(_), InvalidRowPolicy::Skip) => skipped_rows.push(*line),
                (Some(c), InvalidRowPolicy::Reject) => {
                    return Err(Error::Parse {
                        row: *line,
                        msg: format!("column {c}: `{}` is not a finite number", r[c]),
                    })
                }
            }
        }

        let mut class_names: Vec<String> = match &layout {
            Layout::None => Vec::new(),
            Layout::Class(c) => {
                let mut names: Vec<String> = kept.iter().map(|(_, _, r)| r[*c].clone()).collect();
                sort_class_names(&mut names);
                names.dedup();
                names
            }
            Layout::Indicators(cols) => cols
                .iter()
                .enumerate()
                .map(|(t, &c)| match &header {
                    Some((_, h)) => h[c].clone(),
                    None => format!("c{t}"),
                })
                .collect(),
        };
        if let Layout::Indicators(_) = layout {
            // Duplicate header names would make classes ambiguous by name.
            let mut seen = class_names.clone();
            seen.sort();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                class_names = (0..class_names.len()).map(|t| format!("c{t}")).collect();
            }
        }

        let mut rows = Vec::with_capacity(kept.len());
        let mut labels = Vec::with_capacity(kept.len());
        for (line, features, r) in kept {
            let set = match &layout {
                Layout::None => Vec::new(),
                Layout::Class(c) => {
                    vec![class_names
                        .iter()
                        .position(|n| n == &r[*c])
                        .expect("class names collected from the same records")]
                }
                Layout::Indicators(cols) => {
                    let mut set = Vec::new();
                    for (t, &c) in cols.iter().enumerate() {
                        match parse_number(&r[c]) {
                            Some(1.0) => set.push(t),
                            Some(0.0) => {}
                            _ => {
                                return Err(Error::Parse {
                                    row: line,
                                    msg: format!(
                                        "column {c}: indicator `{}` must be 0 or 1",
                                        r[c]
                                    ),
                                })
                            }
                        }
                    }
                    set
                }
            };
            rows.push(features);
            labels.push(set);
        }
        if rows.is_empty() {
            return Err(Error::InvalidData("file has no usable records".into()));
        }

        Ok(Self {
            feature_names,
            class_names,
            rows,
            labels,
            skipped_rows,
        })
    }

    /// Writes a header, the features, then one 0/1 indicator column per class.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::Io(e.to_string());
        let header: Vec<&str> = self
            .feature_names
            .iter()
            .chain(&self.class_names)
            .map(String::as_str)
            .collect();
        wtr.write_record(&header).map_err(io)?;
        let k = self.class_names.len();
        for (row, set) in self.rows.iter().zip(&self.labels) {
            let mut fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let mut ind = vec!["0".to_string(); k];
            for &j in set {
                ind[j] = "1".to_string();
            }
            fields.extend(ind);
            wtr.write_record(&fields).map_err(io)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// The label spec under which [`LabeledTable::write_csv`] output reloads.
    pub fn written_label_spec(&self) -> LabelSpec {
        match self.class_names.len() {
            0 => LabelSpec::None,
            n => LabelSpec::TrailingIndicators(n),
        }
    }
}

/// Reads a comma-delimited file.
pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<LabeledTable> {
    let path = path.as_ref();
    let file = File::open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    LabeledTable::from_reader(std::io::BufReader::new(file), options)
}
