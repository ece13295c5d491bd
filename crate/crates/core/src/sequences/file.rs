//! Reading `(n, value)` sequences from CSV or JSON.
//!
//! CSV files have the header `n,value`. JSON files hold an array of
//! `[n, value]` pairs; large or long-mantissa values should be given as
//! strings so they are read exactly.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use rug::{Float, Integer};

use super::provider::{SequenceKind, SequenceProvider, TableValue};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceFileFormat {
    Csv,
    Json,
}

impl SequenceFileFormat {
    /// Guess from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }
}

impl FromStr for SequenceFileFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown sequence format `{other}`")),
        }
    }
}

fn format_error(path: &Path, reason: impl Into<String>) -> Error {
    Error::SequenceFormat {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn parse_value(text: &str) -> Option<TableValue> {
    let text = text.trim();
    if let Ok(int) = Integer::from_str(text.strip_prefix('+').unwrap_or(text)) {
        return Some(TableValue::Integer(int));
    }
    let parsed = Float::parse(text).ok()?;
    let probe = Float::with_val(64, parsed);
    probe
        .is_finite()
        .then(|| TableValue::Decimal(text.to_string()))
}

fn read_csv(path: &Path, text: &str) -> Result<Vec<(u64, TableValue)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| format_error(path, e.to_string()))?;
    if headers.len() != 2 || &headers[0] != "n" || &headers[1] != "value" {
        return Err(format_error(path, "expected the header `n,value`"));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| format_error(path, e.to_string()))?;
        let line = i + 2;
        if record.len() != 2 {
            return Err(format_error(
                path,
                format!("line {line}: expected 2 columns"),
            ));
        }
        let n = record[0]
            .parse::<u64>()
            .map_err(|e| format_error(path, format!("line {line}: bad index: {e}")))?;
        let value = parse_value(&record[1]).ok_or_else(|| {
            format_error(path, format!("line {line}: bad value `{}`", &record[1]))
        })?;
        rows.push((n, value));
    }
    Ok(rows)
}

fn read_json(path: &Path, text: &str) -> Result<Vec<(u64, TableValue)>> {
    let doc: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format_error(path, e.to_string()))?;
    let items = doc
        .as_array()
        .ok_or_else(|| format_error(path, "expected an array of [n, value] pairs"))?;
    let mut rows = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| format_error(path, format!("entry {i}: expected [n, value]")))?;
        let n = pair[0].as_u64().ok_or_else(|| {
            format_error(
                path,
                format!("entry {i}: index must be a non-negative integer"),
            )
        })?;
        let text = match &pair[1] {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(num) => num.to_string(),
            _ => {
                return Err(format_error(
                    path,
                    format!("entry {i}: value must be a number or string"),
                ))
            }
        };
        let value = parse_value(&text)
            .ok_or_else(|| format_error(path, format!("entry {i}: bad value `{text}`")))?;
        rows.push((n, value));
    }
    Ok(rows)
}

/// Load a sequence file. Indices must be contiguous and ascending and all
/// values positive. The provider uses empirical `A`, `δ` until parameters
/// are attached with [`SequenceProvider::with_params`].
pub fn load_sequence(
    path: impl AsRef<Path>,
    format: SequenceFileFormat,
) -> Result<SequenceProvider> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = match format {
        SequenceFileFormat::Csv => read_csv(path, &text)?,
        SequenceFileFormat::Json => read_json(path, &text)?,
    };
    let n0 = rows
        .first()
        .ok_or_else(|| format_error(path, "no records"))?
        .0;
    let mut values = Vec::with_capacity(rows.len());
    for (i, (n, value)) in rows.into_iter().enumerate() {
        let expected = n0 + i as u64;
        if n != expected {
            return Err(format_error(
                path,
                format!("gap in index: expected n={expected}, found n={n}"),
            ));
        }
        if !value.is_positive() {
            return Err(format_error(
                path,
                format!("value at n={n} is not positive"),
            ));
        }
        values.push(value);
    }
    SequenceProvider::from_table(
        SequenceKind::UserFile,
        path.display().to_string(),
        n0,
        values,
    )
}
