//! CSV tables with `#` metadata lines and a JSON schema describing their columns.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: String,
    /// Empty for dimensionless columns.
    pub unit: String,
    pub description: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: &str, description: impl Into<String>) -> Self {
        Self { name: name.into(), unit: unit.into(), description: description.into() }
    }

    pub fn header(&self) -> String {
        if self.unit.is_empty() || self.unit == "1" {
            self.name.clone()
        } else {
            format!("{}[{}]", self.name, self.unit)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest round-trip decimal; exponent form outside [1e−4, 1e15).
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub description: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, description: impl Into<String>, columns: Vec<Column>) -> Self {
        Self { name: name.into(), description: description.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn to_csv(&self, meta: &Metadata) -> CliResult<Vec<u8>> {
        let mut buf = Vec::new();
        for (k, v) in meta.lines() {
            buf.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf);
        let csv_err = |e: csv::Error| CliError::Usage(format!("CSV encoding of {}: {e}", self.name));
        w.write_record(self.columns.iter().map(Column::header)).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| CliError::Usage(format!("CSV encoding of {}: {e}", self.name)))
    }
}

/// Provenance written at the top of every CSV; no timestamps, so reruns are byte-identical.
#[derive(Debug, Clone, PartialEq)]
pub struct Metadata {
    pub config_hash: String,
    pub seed: u64,
    pub command: String,
}

impl Metadata {
    fn lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("tool", format!("ghzbudget {TOOL_VERSION}")),
            ("config_hash", self.config_hash.clone()),
            ("seed", self.seed.to_string()),
            ("command", self.command.clone()),
        ]
    }
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn write_table(dir: &Path, table: &Table, meta: &Metadata) -> CliResult<PathBuf> {
    let path = dir.join(format!("{}.csv", table.name));
    write_bytes(&path, &table.to_csv(meta)?)?;
    Ok(path)
}

#[derive(Serialize)]
struct SchemaFile<'a> {
    file: String,
    description: &'a str,
    columns: Vec<SchemaColumn<'a>>,
}

#[derive(Serialize)]
struct SchemaColumn<'a> {
    header: String,
    #[serde(flatten)]
    column: &'a Column,
}

/// `schema.json` documenting every column of the tables written in one run.
pub fn write_schema(dir: &Path, tables: &[Table]) -> CliResult<PathBuf> {
    let files: Vec<SchemaFile> = tables
        .iter()
        .map(|t| SchemaFile {
            file: format!("{}.csv", t.name),
            description: &t.description,
            columns: t.columns.iter().map(|c| SchemaColumn { header: c.header(), column: c }).collect(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&files).expect("schema serializes");
    text.push('\n');
    let path = dir.join("schema.json");
    write_bytes(&path, text.as_bytes())?;
    Ok(path)
}
