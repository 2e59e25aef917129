//! Flat-record rendering to CSV and JSON.

use std::io::Write;
use std::path::Path;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Num(f64),
    Int(u64),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Str(v) => s.serialize_str(v),
            Cell::Num(v) => s.serialize_f64(*v),
            Cell::Int(v) => s.serialize_u64(*v),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Null => s.serialize_none(),
        }
    }
}

/// Ordered key/value pairs; serializes as a JSON object in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(String, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(mut self, key: impl Into<String>, value: impl Into<Cell>) -> Self {
        self.0.push((key.into(), value.into()));
        self
    }

    fn keys(&self) -> Vec<&str> {
        self.0.iter().map(|(k, _)| k.as_str()).collect()
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A table renders as a CSV with one header or a JSON array; a single record
/// renders as a one-row CSV or a JSON object.
pub enum Output {
    Single(Record),
    Table(Vec<Record>),
}

impl Output {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let text = match self {
                    Output::Single(r) => serde_json::to_string_pretty(r),
                    Output::Table(rs) => serde_json::to_string_pretty(rs),
                }
                .map_err(|e| CliError::Runtime(e.to_string()))?;
                Ok(text + "\n")
            }
            Format::Csv => {
                let records: &[Record] = match self {
                    Output::Single(r) => std::slice::from_ref(r),
                    Output::Table(rs) => rs,
                };
                render_csv(records)
            }
        }
    }
}

fn render_csv(records: &[Record]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Runtime(e.to_string());
    if let Some(first) = records.first() {
        let header = first.keys();
        w.write_record(&header).map_err(io)?;
        for r in records {
            if r.keys() != header {
                return Err(CliError::Runtime("records disagree on columns".into()));
            }
            w.write_record(r.0.iter().map(|(_, c)| c.csv_text())).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}
