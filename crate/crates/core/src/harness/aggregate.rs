//! Replication statistics and the aggregate CSV format.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const AGGREGATE_HEADER: &str = "method,dimension,value,replications,mean_success_ratio,std,ci95_half_width,mean_runtime_ms,mean_fallback_rate";

/// Mean and sample standard deviation, independent of input order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    if sorted.len() < 2 {
        return (mean, 0.0);
    }
    let mut sq: Vec<f64> = sorted.iter().map(|x| (x - mean) * (x - mean)).collect();
    sq.sort_by(f64::total_cmp);
    (mean, (sq.iter().sum::<f64>() / (n - 1.0)).sqrt())
}

pub fn ci95_half_width(std: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        1.96 * std / (n as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub method: String,
    pub dimension: String,
    /// Value of the swept dimension; `None` for single-cell runs.
    pub value: Option<f64>,
    pub replications: usize,
    pub mean_success_ratio: f64,
    pub std: f64,
    pub ci95_half_width: f64,
    /// Only filled when timing is recorded.
    pub mean_runtime_ms: Option<f64>,
    pub mean_fallback_rate: f64,
}

impl AggregateRow {
    pub fn from_ratios(
        method: impl Into<String>,
        dimension: impl Into<String>,
        value: Option<f64>,
        success_ratios: &[f64],
        fallback_rates: &[f64],
        runtimes_ms: Option<&[f64]>,
    ) -> Self {
        let (mean, std) = mean_std(success_ratios);
        AggregateRow {
            method: method.into(),
            dimension: dimension.into(),
            value,
            replications: success_ratios.len(),
            mean_success_ratio: mean,
            std,
            ci95_half_width: ci95_half_width(std, success_ratios.len()),
            mean_runtime_ms: runtimes_ms.map(|r| mean_std(r).0),
            mean_fallback_rate: mean_std(fallback_rates).0,
        }
    }

    pub fn ci95(&self) -> (f64, f64) {
        (
            self.mean_success_ratio - self.ci95_half_width,
            self.mean_success_ratio + self.ci95_half_width,
        )
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.method,
            self.dimension,
            self.value.map(fmt_sig9).unwrap_or_default(),
            self.replications,
            fmt_sig9(self.mean_success_ratio),
            fmt_sig9(self.std),
            fmt_sig9(self.ci95_half_width),
            self.mean_runtime_ms.map(fmt_sig9).unwrap_or_default(),
            fmt_sig9(self.mean_fallback_rate),
        )
    }

    pub fn from_csv_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Csv(format!(
                "expected 9 fields, found {} in {line:?}",
                fields.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| Error::Csv(format!("bad number {s:?}")))
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        Ok(AggregateRow {
            method: fields[0].to_string(),
            dimension: fields[1].to_string(),
            value: opt(fields[2])?,
            replications: fields[3]
                .parse()
                .map_err(|_| Error::Csv(format!("bad count {:?}", fields[3])))?,
            mean_success_ratio: num(fields[4])?,
            std: num(fields[5])?,
            ci95_half_width: num(fields[6])?,
            mean_runtime_ms: opt(fields[7])?,
            mean_fallback_rate: num(fields[8])?,
        })
    }
}

pub fn write_aggregate_csv<W: Write>(mut out: W, rows: &[AggregateRow]) -> Result<()> {
    writeln!(out, "{AGGREGATE_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.to_csv_line())?;
    }
    Ok(())
}

pub fn read_aggregate_csv<R: BufRead>(input: R) -> Result<Vec<AggregateRow>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim_end() != AGGREGATE_HEADER {
        return Err(Error::Csv("missing aggregate header".into()));
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            rows.push(AggregateRow::from_csv_line(&line)?);
        }
    }
    Ok(rows)
}

/// `(method - baseline) / baseline` on mean success ratios.
pub fn relative_improvement(method_row: &AggregateRow, baseline_row: &AggregateRow) -> Result<f64> {
    relative_improvement_of(method_row.mean_success_ratio, baseline_row.mean_success_ratio)
}

pub fn relative_improvement_of(method: f64, baseline: f64) -> Result<f64> {
    if baseline.is_nan() || baseline <= 0.0 {
        return Err(Error::invalid(format!(
            "baseline success ratio {baseline} must be positive"
        )));
    }
    Ok((method - baseline) / baseline)
}

/// Fixed-point decimal with nine significant digits.
pub fn fmt_sig9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may carry into a new digit (9.99999999995 -> 10.00000000)
    let carried = s.trim_start_matches('-').split('.').next().unwrap().len() as i32;
    if decimals > 0 && carried > magnitude.max(0) + 1 {
        let d = decimals - 1;
        return format!("{x:.d$}");
    }
    s
}
