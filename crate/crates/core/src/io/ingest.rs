//! Reshaping a univariate series into daily (or other periodic) curves.

use std::fs::File;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::sample::FunctionalSample;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRef {
    Name(String),
    /// Zero-based field position.
    Index(usize),
}

impl std::str::FromStr for ColumnRef {
    type Err = Error;

    /// All-digit strings are positions, anything else a header name.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Err(Error::Config("empty column reference".into()));
        }
        Ok(match t.parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(t.to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    Error,
    DropWholeCurve,
}

impl std::str::FromStr for MissingPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "error" => Ok(Self::Error),
            "drop_whole_curve" | "drop" => Ok(Self::DropWholeCurve),
            other => Err(Error::Config(format!("unknown missing-value policy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSpec {
    pub input: PathBuf,
    pub column: ColumnRef,
    /// Observations per curve.
    pub period: usize,
    pub timestamp_column: Option<ColumnRef>,
    pub missing: MissingPolicy,
    pub has_header: bool,
    pub delimiter: u8,
    /// Grid points are `span * j / period`, `j = 1..=period`. `None` gives
    /// 24 for a period of 48 (half-hourly data in hours) and `period`
    /// otherwise.
    pub grid_span: Option<f64>,
}

impl IngestSpec {
    pub fn new(input: impl Into<PathBuf>, column: ColumnRef, period: usize) -> Self {
        Self {
            input: input.into(),
            column,
            period,
            timestamp_column: None,
            missing: MissingPolicy::Error,
            has_header: true,
            delimiter: b',',
            grid_span: None,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        let span = self
            .grid_span
            .unwrap_or(if self.period == 48 { 24.0 } else { self.period as f64 });
        if !(span.is_finite() && span > 0.0) {
            return Err(Error::Config(format!("grid span {span} must be positive")));
        }
        let p = self.period as f64;
        Grid::new((1..=self.period).map(|j| span * j as f64 / p).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestResult {
    pub sample: FunctionalSample,
    /// Indices (in the undropped sequence) of curves removed for missing values.
    pub dropped: Vec<usize>,
    /// Timestamp of the first observation of each retained curve.
    pub curve_labels: Option<Vec<String>>,
}

fn is_missing(cell: &str) -> bool {
    matches!(cell.trim().to_ascii_lowercase().as_str(), "" | "na" | "nan" | "null")
}

fn resolve(col: &ColumnRef, header: Option<&csv::StringRecord>) -> Result<usize> {
    match col {
        ColumnRef::Index(i) => Ok(*i),
        ColumnRef::Name(name) => header
            .and_then(|h| h.iter().position(|f| f.trim() == name))
            .ok_or_else(|| Error::Config(format!("column {name:?} not found in header"))),
    }
}

/// Reads one column and reshapes it row-major into `N / period` curves.
///
/// Rows are numbered as file lines in error messages. Under
/// [`MissingPolicy::DropWholeCurve`] a curve with any missing cell is
/// removed and its index logged; non-numeric cells are always errors.
pub fn ingest(spec: &IngestSpec) -> Result<IngestResult> {
    if spec.period < 2 {
        return Err(Error::Config(format!("period {} must be at least 2", spec.period)));
    }
    let file = File::open(&spec.input).map_err(|e| Error::io(&spec.input, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(spec.has_header)
        .delimiter(spec.delimiter)
        .flexible(true)
        .from_reader(file);
    let header = if spec.has_header { Some(reader.headers()?.clone()) } else { None };
    let col = resolve(&spec.column, header.as_ref())?;
    let ts_col = spec
        .timestamp_column
        .as_ref()
        .map(|c| resolve(c, header.as_ref()))
        .transpose()?;

    let mut values: Vec<Option<f64>> = Vec::new();
    let mut stamps: Vec<String> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let cell = rec.get(col).ok_or_else(|| Error::Parse {
            row: line,
            value: String::new(),
        })?;
        if is_missing(cell) {
            if spec.missing == MissingPolicy::Error {
                return Err(Error::Parse {
                    row: line,
                    value: cell.to_string(),
                });
            }
            values.push(None);
        } else {
            let v = cell.trim().parse::<f64>().ok().filter(|v| v.is_finite());
            values.push(Some(v.ok_or_else(|| Error::Parse {
                row: line,
                value: cell.to_string(),
            })?));
        }
        if let Some(t) = ts_col {
            stamps.push(rec.get(t).unwrap_or("").to_string());
        }
    }

    let len = values.len();
    let period = spec.period;
    if len % period != 0 {
        return Err(Error::NotDivisible { len, period });
    }
    let mut rows = Vec::with_capacity(len / period);
    let mut labels = Vec::new();
    let mut dropped = Vec::new();
    for (i, chunk) in values.chunks(period).enumerate() {
        match chunk.iter().copied().collect::<Option<Vec<f64>>>() {
            Some(curve) => {
                rows.push(curve);
                if ts_col.is_some() {
                    labels.push(stamps[i * period].clone());
                }
            }
            None => {
                log::warn!("dropping curve {i}: missing values");
                dropped.push(i);
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(IngestResult {
        sample: FunctionalSample::from_rows(&rows, spec.grid()?)?,
        dropped,
        curve_labels: ts_col.map(|_| labels),
    })
}
