//! Tabular output shared by all commands.
//!
//! CSV: `#` lines echo the parameters, then a header and one row per record,
//! then `#` notes. Floats are written with 17 significant digits.
//! JSON: `{"meta": {...}, "rows": [{...}, ...]}` with the same column names.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

use crate::config::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(value: Option<f64>) -> Self {
        value.map_or(Cell::Empty, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            // JSON has no NaN or infinity
            Cell::Float(x) if x.is_finite() => json!(x),
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub meta: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(meta: Map<String, Value>, columns: Vec<&'static str>) -> Self {
        Self { meta, columns, ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        for (key, value) in &self.meta {
            writeln!(out, "# {key} = {}", meta_text(value))?;
        }
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::csv))?;
        }
        out.write_all(&writer.into_inner().context("flushing CSV")?)?;
        for note in &self.notes {
            writeln!(out, "# {note}")?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let mut meta = self.meta.clone();
        if !self.notes.is_empty() {
            meta.insert("notes".into(), json!(self.notes));
        }
        json!({ "meta": meta, "rows": rows })
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)?;
                Ok(())
            }
        }
    }

    /// Writes to `path`, or stdout when `None`.
    pub fn emit(&self, format: Format, path: Option<&Path>) -> Result<()> {
        match path {
            Some(path) => {
                let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                let mut out = std::io::BufWriter::new(file);
                self.write(format, &mut out)?;
                out.flush()?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut out = stdout.lock();
                self.write(format, &mut out)?;
                out.flush()?;
            }
        }
        Ok(())
    }
}

fn meta_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut meta = Map::new();
        meta.insert("potential".into(), json!("oscillator"));
        let mut t = Table::new(meta, vec!["n", "E"]);
        t.push(vec![Cell::Int(0), Cell::Float(1.5)]);
        t.push(vec![Cell::Int(1), Cell::Empty]);
        t.notes.push("a note".into());
        t
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# potential = oscillator\nn,E\n0,1.5000000000000000e0\n1,\n# a note\n");
    }

    #[test]
    fn json_layout() {
        let v = sample().to_json();
        assert_eq!(v["rows"][0]["E"], json!(1.5));
        assert_eq!(v["rows"][1]["E"], Value::Null);
        assert_eq!(v["meta"]["notes"][0], json!("a note"));
    }
}
