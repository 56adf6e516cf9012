//! Worst-case nonconforming fractions from specification limits and process moments.

use std::io::Read;

use serde::Serialize;
use tailbound_core::{bound, DistributionClass, Error, IntervalSpec};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapabilityInput {
    pub lsl: f64,
    pub usl: f64,
    pub mean: f64,
    pub sd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl CapabilityInput {
    pub fn new(lsl: f64, usl: f64, mean: f64, sd: f64, n: Option<usize>) -> Result<Self, CliError> {
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(CliError::Input(format!("sd must be positive, got {sd}")));
        }
        if !(lsl < mean && mean < usl) || mean.is_nan() {
            return Err(CliError::Input(format!(
                "mean {mean} must lie strictly between lsl {lsl} and usl {usl}"
            )));
        }
        Ok(CapabilityInput {
            lsl,
            usl,
            mean,
            sd,
            n,
        })
    }

    /// Distance from the mean to the lower limit in SD units.
    pub fn u(&self) -> f64 {
        (self.mean - self.lsl) / self.sd
    }

    /// Distance from the mean to the upper limit in SD units.
    pub fn v(&self) -> f64 {
        (self.usl - self.mean) / self.sd
    }

    pub fn interval(&self) -> Result<IntervalSpec, CliError> {
        Ok(IntervalSpec::new(self.u(), self.v())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapabilityRow {
    pub class: DistributionClass,
    pub bound: Option<f64>,
    pub ppm: Option<u64>,
    pub regime: Option<String>,
    pub status: String,
}

/// One row per class; classes without a sharp bound at `(u, v)` carry no value.
pub fn report(input: &CapabilityInput) -> Result<Vec<CapabilityRow>, CliError> {
    let interval = input.interval()?;
    let mut rows = Vec::with_capacity(DistributionClass::ALL.len());
    for class in DistributionClass::ALL {
        let row = match bound(class, interval) {
            Ok(b) => CapabilityRow {
                class,
                bound: Some(b.value),
                ppm: Some((1e6 * b.value).round() as u64),
                regime: Some(b.regime),
                status: "ok".into(),
            },
            Err(Error::OutOfTheoremRange(_)) => empty_row(class, "out of range"),
            Err(Error::InvalidClassQuery(_)) => empty_row(class, "not applicable"),
            Err(e) => return Err(e.into()),
        };
        rows.push(row);
    }
    Ok(rows)
}

fn empty_row(class: DistributionClass, status: &str) -> CapabilityRow {
    CapabilityRow {
        class,
        bound: None,
        ppm: None,
        regime: None,
        status: status.into(),
    }
}

/// Reads one numeric column from CSV with a header row.
///
/// Any unparsable record or cell is an error naming its line.
pub fn read_column<R: Read>(reader: R, column: &str) -> Result<Vec<f64>, CliError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| CliError::Data(format!("line 1: no column named {column:?} in header")))?;
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let cell = record
            .get(idx)
            .ok_or_else(|| CliError::Data(format!("line {line}: missing column {column:?}")))?;
        let x: f64 = cell.parse().map_err(|_| {
            CliError::Data(format!(
                "line {line}: {cell:?} in column {column:?} is not a number"
            ))
        })?;
        if !x.is_finite() {
            return Err(CliError::Data(format!(
                "line {line}: {cell:?} is not finite"
            )));
        }
        values.push(x);
    }
    Ok(values)
}

fn csv_error(e: csv::Error) -> CliError {
    match e.position() {
        Some(p) => CliError::Data(format!("line {}: {e}", p.line())),
        None => CliError::Data(e.to_string()),
    }
}

/// Sample mean and standard deviation with divisor `n − 1`.
pub fn sample_moments(values: &[f64]) -> Result<(f64, f64), CliError> {
    let n = values.len();
    if n < 2 {
        return Err(CliError::Input(format!(
            "need at least 2 data rows, got {n}"
        )));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
    Ok((mean, (ss / (n - 1) as f64).sqrt()))
}
