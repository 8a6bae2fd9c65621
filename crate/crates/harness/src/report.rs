//! Fixed-schema table output.
//!
//! CSV header order: `model,method,scenario,n,param,ess,sess,ct_seconds,mse,accept_rate`
//! (one row per parameter per method); the JSON form is an array of objects
//! with identical keys.

use crate::{HarnessError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub model: String,
    pub method: String,
    pub scenario: String,
    pub n: usize,
    pub param: String,
    pub ess: f64,
    pub sess: f64,
    pub ct_seconds: f64,
    pub mse: f64,
    pub accept_rate: f64,
}

fn io_err(path: &Path, source: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn write_csv(rows: &[ReportRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => io_err(path, io),
        other => HarnessError::Serde(format!("{other:?}")),
    })?;
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| HarnessError::Serde(e.to_string()))?;
    }
    writer
        .flush()
        .map_err(|e| io_err(path, e))?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => io_err(path, io),
        other => HarnessError::Serde(format!("{other:?}")),
    })?;
    reader
        .deserialize()
        .map(|r| r.map_err(|e| HarnessError::Serde(e.to_string())))
        .collect()
}

pub fn write_json(rows: &[ReportRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(HarnessError::EmptyReport);
    }
    let text =
        serde_json::to_string_pretty(rows).map_err(|e| HarnessError::Serde(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_json(path: &Path) -> Result<Vec<ReportRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Serde(e.to_string()))
}
