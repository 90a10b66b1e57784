//! Tabular experiment records serialised as CSV grids plus a JSON summary.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Column-labelled grid of numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Header row, then one line per row with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_float(*x)))?;
        }
        w.flush()
    }
}

/// Scientific notation with 17 significant digits; parses back to the same f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Result of one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub parameters: Value,
    #[serde(skip)]
    pub tables: BTreeMap<String, Table>,
    pub summary: Map<String, Value>,
    pub rng_seed: Option<u64>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, parameters: Value) -> Self {
        Self {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters,
            tables: BTreeMap::new(),
            summary: Map::new(),
            rng_seed: None,
        }
    }

    pub fn with_table(mut self, name: &str, table: Table) -> Self {
        self.tables.insert(name.to_string(), table);
        self
    }

    pub fn set<V: Serialize>(&mut self, key: &str, value: V) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.summary.insert(key.to_string(), v);
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.get(name)
    }

    /// Summary document: metadata, parameters, scalars and the column schema
    /// of every table.
    pub fn summary_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serialises");
        let schema: Map<String, Value> = self
            .tables
            .iter()
            .map(|(k, t)| {
                (k.clone(), serde_json::json!({ "columns": t.columns, "rows": t.rows.len() }))
            })
            .collect();
        v["tables"] = Value::Object(schema);
        v
    }

    /// Writes `<table>.csv` for every table and the summary as `summary_name`.
    pub fn write_to_dir(&self, dir: &Path, summary_name: &str) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, table) in &self.tables {
            let path = dir.join(format!("{name}.csv"));
            table.write_csv(io::BufWriter::new(fs::File::create(&path)?))?;
            written.push(path);
        }
        let path = dir.join(summary_name);
        let mut text = serde_json::to_string_pretty(&self.summary_json()).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(&path, text)?;
        written.push(path);
        Ok(written)
    }
}
