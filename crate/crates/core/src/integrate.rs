//! Row-wise join of an external per-word analysis table onto the matrix.
//!
//! The join is positional: row *i* of the table belongs to record *i*.
//! External analyzers may rewrite words, so the identifier column is only
//! used for the optional verification pass.

use std::path::Path;

use crate::error::{Error, Result, Warning};
use crate::matrix::{BwlfRecord, MATRIX_HEADER};
use crate::util;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Tab,
    Comma,
}

impl Delimiter {
    pub fn byte(self) -> u8 {
        match self {
            Delimiter::Tab => b'\t',
            Delimiter::Comma => b',',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalRow {
    pub identifier: String,
    /// Values exactly as they appeared in the file; each one parses as a
    /// number.
    pub raw: Vec<String>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExternalTable {
    pub identifier_header: String,
    pub headers: Vec<String>,
    pub rows: Vec<ExternalRow>,
}

impl ExternalTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }
}

pub fn external_from_str(text: &str, delimiter: Delimiter) -> Result<ExternalTable> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter.byte())
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    if header.is_empty() {
        return Err(Error::Matrix("analysis table has no header".into()));
    }
    let width = header.len();
    let headers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != width {
            return Err(Error::RaggedRow {
                line,
                expected: width,
                found: rec.len(),
            });
        }
        let mut raw = Vec::with_capacity(width - 1);
        let mut values = Vec::with_capacity(width - 1);
        for (field, name) in rec.iter().skip(1).zip(&headers) {
            let value: f64 = field.trim().parse().map_err(|_| Error::NonNumeric {
                line,
                column: name.clone(),
                value: field.to_string(),
            })?;
            raw.push(field.to_string());
            values.push(value);
        }
        rows.push(ExternalRow {
            identifier: rec[0].to_string(),
            raw,
            values,
        });
    }
    Ok(ExternalTable {
        identifier_header: header[0].to_string(),
        headers,
        rows,
    })
}

pub fn import_external(path: &Path, delimiter: Delimiter) -> Result<ExternalTable> {
    external_from_str(&util::read_to_string(path)?, delimiter)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegratedTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub fn join_rows(records: &[BwlfRecord], table: &ExternalTable) -> Result<IntegratedTable> {
    if records.len() != table.rows.len() {
        return Err(Error::RowCountMismatch {
            records: records.len(),
            rows: table.rows.len(),
        });
    }
    let header = MATRIX_HEADER
        .iter()
        .map(|h| h.to_string())
        .chain(table.headers.iter().cloned())
        .collect();
    let rows = records
        .iter()
        .zip(&table.rows)
        .map(|(rec, ext)| {
            rec.fields()
                .into_iter()
                .chain(ext.raw.iter().cloned())
                .collect()
        })
        .collect();
    Ok(IntegratedTable { header, rows })
}

/// Flags rows whose identifier differs from the record's word, ignoring
/// case.
pub fn verify_identifiers(records: &[BwlfRecord], table: &ExternalTable) -> Vec<Warning> {
    records
        .iter()
        .zip(&table.rows)
        .enumerate()
        .filter(|(_, (rec, ext))| rec.word.to_lowercase() != ext.identifier.to_lowercase())
        .map(|(i, (rec, ext))| Warning::IdentifierMismatch {
            row: i + 1,
            word: rec.word.clone(),
            identifier: ext.identifier.clone(),
        })
        .collect()
}

pub fn integrated_to_string(table: &IntegratedTable) -> Result<String> {
    let bytes = util::csv_bytes(b',', |w| {
        w.write_record(&table.header)?;
        for row in &table.rows {
            w.write_record(row)?;
        }
        Ok(())
    })?;
    Ok(String::from_utf8(bytes).expect("integrated output is valid UTF-8"))
}

pub fn write_integrated(table: &IntegratedTable, path: &Path) -> Result<()> {
    util::write_atomic(path, integrated_to_string(table)?.as_bytes())
}
