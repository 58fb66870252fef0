//! Deterministic data artifacts.
//!
//! CSV and JSON renderings share one row model so the two formats carry the
//! same numbers. CSV cells use the shortest round-trip float form (Rust's
//! `Display`), UTF-8, LF endings; identical inputs give byte-identical files.

use std::fmt;
use std::io;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Bool(v) => write!(f, "{v}"),
            Cell::Text(v) => {
                if v.contains(',') || v.contains('"') || v.contains('\n') {
                    write!(f, "\"{}\"", v.replace('"', "\"\""))
                } else {
                    write!(f, "{v}")
                }
            }
        }
    }
}

impl Cell {
    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(v) => serde_json::json!(v),
            Cell::Int(v) => serde_json::json!(v),
            Cell::Bool(v) => serde_json::json!(v),
            Cell::Text(v) => serde_json::json!(v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            name,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Cell::json).collect())
            .collect();
        let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
        let mut text = serde_json::to_string_pretty(&doc).expect("plain values");
        text.push('\n');
        text
    }

    /// Write `<name>.csv` or `<name>.json` under `dir`.
    pub fn write(&self, dir: &Path, format: &str) -> io::Result<PathBuf> {
        let (extension, body) = match format {
            "json" => ("json", self.json()),
            _ => ("csv", self.csv()),
        };
        let path = dir.join(format!("{}.{extension}", self.name));
        std::fs::write(&path, body)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_shortest_floats_and_lf() {
        let mut t = Table::new("t", vec!["a", "b"]);
        t.push(vec![Cell::Float(2.0), Cell::Float(0.1)]);
        t.push(vec![Cell::Float(1.0 / 3.0), Cell::Bool(true)]);
        assert_eq!(t.csv(), "a,b\n2,0.1\n0.3333333333333333,true\n");
    }

    #[test]
    fn text_cells_escape_commas() {
        let mut t = Table::new("t", vec!["a"]);
        t.push(vec![Cell::Text("x,y".into())]);
        assert_eq!(t.csv(), "a\n\"x,y\"\n");
    }

    #[test]
    fn json_round_trips_through_serde() {
        let mut t = Table::new("t", vec!["a", "b"]);
        t.push(vec![Cell::Float(0.5), Cell::Text("kink".into())]);
        let doc: serde_json::Value = serde_json::from_str(&t.json()).unwrap();
        assert_eq!(doc["columns"][0], "a");
        assert_eq!(doc["rows"][0][0], 0.5);
        assert_eq!(doc["rows"][0][1], "kink");
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn short_rows_are_rejected() {
        let mut t = Table::new("t", vec!["a", "b"]);
        t.push(vec![Cell::Float(1.0)]);
    }
}
