//! CSV and JSON emission with a fixed column schema per command.

use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::I(k) => k.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::I(k) => Value::from(*k),
            Cell::S(s) => Value::from(s.as_str()),
            Cell::B(b) => Value::from(*b),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Replaces the CSV rendering when set.
    pub raw_text: Option<String>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<Cell>>) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows,
            raw_text: None,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => match &self.raw_text {
                Some(text) => text.clone(),
                None => {
                    let mut out = self.header.join(",");
                    out.push('\n');
                    for row in &self.rows {
                        out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
                        out.push('\n');
                    }
                    out
                }
            },
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            self.header.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serialisable");
                s.push('\n');
                s
            }
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<(), String> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
            None => std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write to standard output: {e}")),
        }
    }
}
