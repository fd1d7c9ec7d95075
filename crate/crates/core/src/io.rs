//! CSV readers for the experiment records and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::calib::LineScanRecord;
use crate::error::{Error, Result};
use crate::mech::CompressionSample;

pub const SCAN_COLUMNS: &[&str] = &["H", "alpha", "V_F", "W", "dx", "d"];
pub const COMPRESSION_COLUMNS: &[&str] = &["strain", "stress", "direction", "branch"];
pub const FORCE_COLUMNS: &[&str] = &["t", "F"];
pub const POINT_COLUMNS: &[&str] = &["x", "y"];
pub const POROSITY_COLUMNS: &[&str] = &["phi", "value"];

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct ForceSample {
    pub t: f64,
    #[serde(rename = "F")]
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct PointSample {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct PorositySample {
    pub phi: f64,
    pub value: f64,
}

fn data(source: &str, message: impl Into<String>) -> Error {
    Error::Data {
        path: source.to_string(),
        message: message.into(),
    }
}

/// Parses CSV text with a header row that must contain `columns`. Extra
/// columns are ignored; `source` names the input in error messages.
pub fn parse_csv<T: DeserializeOwned>(
    text: &str,
    columns: &[&str],
    source: &str,
) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| data(source, e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(data(source, "empty CSV: no header row"));
    }
    if let Some(missing) = columns.iter().find(|c| !headers.iter().any(|h| h == **c)) {
        return Err(data(source, format!("missing column {missing:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<T>().enumerate() {
        // header is line 1
        rows.push(rec.map_err(|e| data(source, format!("row {}: {e}", i + 2)))?);
    }
    if rows.is_empty() {
        return Err(data(source, "no data rows"));
    }
    Ok(rows)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_csv<T: DeserializeOwned>(path: &Path, columns: &[&str]) -> Result<Vec<T>> {
    parse_csv(&read_text(path)?, columns, &path.display().to_string())
}

pub fn read_scans(path: &Path) -> Result<Vec<LineScanRecord>> {
    read_csv(path, SCAN_COLUMNS)
}

pub fn read_compression(path: &Path) -> Result<Vec<CompressionSample>> {
    read_csv(path, COMPRESSION_COLUMNS)
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}
