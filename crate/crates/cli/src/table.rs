//! Rectangular result tables and their CSV / JSON serialization.
//!
//! Tables are plot-ready: one header row, numeric cells with 12
//! significant digits, '.' decimal separator, newline-terminated rows.
//! JSON output carries the same cells as
//! `{"columns": [...], "rows": [[...]], "meta": {...}}`; the meta block
//! records the command line, the seed (when randomness was involved)
//! and the artifact version, so every table is self-describing.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// One table cell: a number or a label (case names, region letters).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Num(v as f64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Num(if v { 1.0 } else { 0.0 })
    }
}

/// Round to 12 significant digits (the documented digit policy for all
/// emitted numbers).
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("scientific round-trip")
}

/// Provenance header carried by every table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMeta {
    /// Canonical command line that produced the table.
    pub command: String,
    /// Seed, for outputs that involved randomness.
    pub seed: Option<u64>,
    /// Artifact version.
    pub version: String,
    /// Free-form notes (e.g. omitted columns and why).
    pub notes: Vec<String>,
}

impl TableMeta {
    pub fn new(command: impl Into<String>) -> Self {
        TableMeta {
            command: command.into(),
            seed: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
            notes: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

/// A rectangular table of results.
#[derive(Debug, Clone)]
pub struct ResultTable {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    pub meta: TableMeta,
}

impl ResultTable {
    pub fn new<S: Into<String>>(columns: Vec<S>, meta: TableMeta) -> Self {
        ResultTable {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            meta,
        }
    }

    /// Append a row; panics if the width does not match the header.
    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    #[allow(dead_code)] // exercised by the preset and campaign tests
    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    #[allow(dead_code)]
    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// CSV: one header row, then data rows; text cells quoted when they
    /// contain a comma, quote, or newline.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.iter().map(|c| csv_escape(c)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            let line = row
                .iter()
                .map(|cell| match cell {
                    Cell::Num(v) => format_number(*v),
                    Cell::Text(s) => csv_escape(s),
                })
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// JSON object `{columns, rows, meta}` with numbers rounded to the
    /// same 12 significant digits as the CSV path.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|cell| match cell {
                            Cell::Num(v) => serde_json::Number::from_f64(sig12(*v))
                                .map(serde_json::Value::Number)
                                .unwrap_or(serde_json::Value::Null),
                            Cell::Text(s) => serde_json::Value::String(s.clone()),
                        })
                        .collect(),
                )
            })
            .collect();
        let meta = serde_json::json!({
            "command": self.meta.command,
            "seed": self.meta.seed,
            "version": self.meta.version,
            "notes": self.meta.notes,
        });
        let doc = serde_json::json!({
            "columns": self.columns,
            "rows": rows,
            "meta": meta,
        });
        serde_json::to_string_pretty(&doc).expect("table serialization")
    }
}

/// Shortest decimal representation of the value rounded to 12
/// significant digits (so `0.5` prints as `0.5`, not `5.000e-1`).
fn format_number(v: f64) -> String {
    format!("{}", sig12(v))
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Output format of the emitted tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Write the table to `path`, or to stdout when no path is given.
pub fn emit(table: &ResultTable, format: OutputFormat, path: Option<&Path>) -> io::Result<()> {
    let body = match format {
        OutputFormat::Csv => table.to_csv(),
        OutputFormat::Json => table.to_json(),
    };
    match path {
        Some(p) => fs::write(p, body),
        None => io::stdout().write_all(body.as_bytes()),
    }
}
