//! Rendering of command results as aligned text, CSV or JSON.

use clap::ValueEnum;
use clusterlin::varfun::format_sig;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Exact integer of any size in full decimal; JSON carries it as a string.
    Int(String),
    Small(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn int(v: impl ToString) -> Self {
        Cell::Int(v.to_string())
    }

    pub fn text(v: impl ToString) -> Self {
        Cell::Text(v.to_string())
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Small(v) => v.to_string(),
            Cell::Float(x) => format_sig(*x),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Small(v) => Value::from(*v),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Small(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Small(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// Rows under a header, plus `key = value` facts printed before the table.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub summary: Vec<(String, Cell)>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Replaces the table layout when set.
    pub plain: Option<String>,
}

impl Report {
    pub fn new(headers: &[&str]) -> Self {
        Self { headers: headers.iter().map(|h| h.to_string()).collect(), ..Self::default() }
    }

    pub fn fact(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.summary.push((key.to_string(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.table(),
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn table(&self) -> String {
        if let Some(plain) = &self.plain {
            return format!("{plain}\n");
        }
        let mut out = String::new();
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}: {}\n", v.render()));
        }
        if self.headers.is_empty() {
            return out;
        }
        if !self.summary.is_empty() {
            out.push('\n');
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| cells.iter().map(|r| r[c].len()).chain([self.headers[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |items: &[String]| {
            items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
        };
        out.push_str(&line(&self.headers));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    /// Header row and data rows only; summary facts become columns when there are no rows.
    fn csv(&self) -> String {
        let (headers, rows): (Vec<String>, Vec<Vec<String>>) = if self.headers.is_empty() {
            (
                self.summary.iter().map(|(k, _)| k.clone()).collect(),
                vec![self.summary.iter().map(|(_, v)| v.render()).collect()],
            )
        } else {
            (self.headers.clone(), self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect())
        };
        let mut out = headers.join(",");
        out.push('\n');
        for row in rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let mut root = Map::new();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        root.insert("summary".into(), Value::Object(summary));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.headers.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        root.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}
