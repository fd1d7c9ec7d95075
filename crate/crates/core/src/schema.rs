//! Versioned JSON documents. Every document carries a `"schema"` tag of the
//! form `<family>/<major>[.<minor>]`; readers refuse unknown majors.

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

pub const CALIB: &str = "infoam-calib/1";
pub const PART: &str = "infoam-part/1";
pub const PLAN: &str = "infoam-plan/1";
pub const VERIFY: &str = "infoam-verify/1";
pub const POWERLAW: &str = "infoam-powerlaw/1";
pub const ANALYSIS: &str = "infoam-analysis/1";
pub const REPORT: &str = "infoam-report/1";

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document has no \"schema\" field (expected {expected})")]
    Missing { expected: &'static str },
    #[error("schema {found:?} is not {expected}")]
    Mismatch {
        expected: &'static str,
        found: String,
    },
}

fn split(tag: &str) -> Option<(&str, u32)> {
    let (family, version) = tag.split_once('/')?;
    let major = version.split('.').next()?.parse().ok()?;
    Some((family, major))
}

/// Accepts `found` when family and major version match `expected`.
pub fn check(expected: &'static str, found: &str) -> Result<(), SchemaError> {
    match (split(expected), split(found)) {
        (Some(e), Some(f)) if e == f => Ok(()),
        _ => Err(SchemaError::Mismatch {
            expected,
            found: found.to_string(),
        }),
    }
}

pub fn from_json<T: DeserializeOwned>(
    text: &str,
    expected: &'static str,
) -> Result<T, SchemaError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value
        .get("schema")
        .and_then(|s| s.as_str())
        .ok_or(SchemaError::Missing { expected })?;
    check(expected, found)?;
    Ok(serde_json::from_value(value)?)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}
