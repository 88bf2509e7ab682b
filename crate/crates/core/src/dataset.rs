//! Numeric datasets and their CSV form.
//!
//! The CSV layout is a header row followed by one record per line. Every
//! column is an input except a trailing `tactic` (or `target`) column, whose
//! cells may be empty for unlabeled records.

use std::io::{Read, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("record {index}: expected {expected} inputs, got {got}")]
    Arity { index: usize, expected: usize, got: usize },
    #[error("record {index}: non-finite value")]
    NonFinite { index: usize },
    #[error("record {index}: no target")]
    Unlabeled { index: usize },
    #[error("line {line}, column `{column}`: cannot parse `{value}` as a number")]
    BadNumber { line: usize, column: String, value: String },
    #[error("dataset has no header")]
    MissingHeader,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub target: f64,
}

/// Labeled training data with a uniform input arity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    samples: Vec<Sample>,
}

impl Dataset {
    pub fn new(samples: Vec<Sample>) -> Result<Self, DatasetError> {
        if let Some(first) = samples.first() {
            let expected = first.input.len();
            for (index, s) in samples.iter().enumerate() {
                if s.input.len() != expected {
                    return Err(DatasetError::Arity {
                        index,
                        expected,
                        got: s.input.len(),
                    });
                }
                if !s.target.is_finite() || s.input.iter().any(|x| !x.is_finite()) {
                    return Err(DatasetError::NonFinite { index });
                }
            }
        }
        Ok(Dataset { samples })
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self, DatasetError>
    where
        I: IntoIterator<Item = (Vec<f64>, f64)>,
    {
        Self::new(
            pairs
                .into_iter()
                .map(|(input, target)| Sample { input, target })
                .collect(),
        )
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn arity(&self) -> Option<usize> {
        self.samples.first().map(|s| s.input.len())
    }

    /// Keeps the samples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub input: Vec<f64>,
    pub target: Option<f64>,
}

/// A dataset file as read from CSV; targets may be missing.
#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub input_columns: Vec<String>,
    /// Name of the target column, if the header has one.
    pub target_column: Option<String>,
    pub rows: Vec<Row>,
}

fn is_target_column(name: &str) -> bool {
    matches!(name, "tactic" | "target")
}

impl DataFile {
    pub fn read<R: Read>(reader: R) -> Result<Self, DatasetError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .flexible(false)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(DatasetError::MissingHeader);
        }
        let target_column = header.last().filter(|h| is_target_column(h)).cloned();
        let n_inputs = header.len() - usize::from(target_column.is_some());
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let parse = |i: usize, s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| DatasetError::BadNumber {
                        line,
                        column: header[i].clone(),
                        value: s.to_string(),
                    })
            };
            let input = (0..n_inputs)
                .map(|i| parse(i, &rec[i]))
                .collect::<Result<Vec<_>, _>>()?;
            let target = match target_column {
                Some(_) if !rec[n_inputs].is_empty() => Some(parse(n_inputs, &rec[n_inputs])?),
                _ => None,
            };
            rows.push(Row { input, target });
        }
        Ok(DataFile {
            input_columns: header[..n_inputs].to_vec(),
            target_column,
            rows,
        })
    }

    pub fn write<W: Write>(&self, writer: W) -> Result<(), DatasetError> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let mut header = self.input_columns.clone();
        header.extend(self.target_column.clone());
        wtr.write_record(&header)?;
        for row in &self.rows {
            let mut fields: Vec<String> = row.input.iter().map(|v| v.to_string()).collect();
            if self.target_column.is_some() {
                fields.push(row.target.map(|t| t.to_string()).unwrap_or_default());
            }
            wtr.write_record(&fields)?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Converts to a labeled dataset; every row must carry a target.
    pub fn to_dataset(&self) -> Result<Dataset, DatasetError> {
        let samples = self
            .rows
            .iter()
            .enumerate()
            .map(|(index, r)| {
                r.target
                    .map(|target| Sample {
                        input: r.input.clone(),
                        target,
                    })
                    .ok_or(DatasetError::Unlabeled { index })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Dataset::new(samples)
    }
}
