//! Tabular output as CSV or as a JSON report with a reproducibility header.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite values have no JSON number form
            Cell::Num(v) if !v.is_finite() => Value::String(v.to_string()),
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
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

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Rows of cells under a fixed header. `violations` counts rows whose
/// checked inequality failed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub violations: usize,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Appends a row whose last column is the `satisfied` flag.
    pub fn push_checked(&mut self, mut row: Vec<Cell>, satisfied: bool) {
        if !satisfied {
            self.violations += 1;
        }
        row.push(Cell::Bool(satisfied));
        self.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column.
    pub fn values(&self, name: &str) -> Vec<f64> {
        let j = self.column(name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().filter_map(|r| r[j].as_f64()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        let csv_err = |e: csv::Error| std::io::Error::other(e.to_string());
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_err)?;
        }
        w.flush()
    }

    pub fn json_rows(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(c.clone(), v.json());
                }
                Value::Object(m)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Header<'a> {
    pub command: &'a str,
    pub config: &'a RunConfig,
    pub seed: u64,
    pub version: &'static str,
}

/// Writes `table` in the configured format. JSON output is
/// `{"header": {...}, "rows": [...]}`.
pub fn write_report<W: Write>(mut out: W, header: &Header, table: &Table, format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => table.write_csv(out),
        Format::Json => {
            let doc = json!({ "header": header, "rows": table.json_rows() });
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.write_all(b"\n")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["name", "x", "k", "satisfied"]);
        t.push_checked(vec!["a,b".into(), 0.1.into(), 3u64.into()], true);
        t.push_checked(vec!["q\"t".into(), f64::NAN.into(), 4u64.into()], false);
        t
    }

    #[test]
    fn csv_quotes_and_terminates() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "name,x,k,satisfied\r\n\"a,b\",0.1,3,true\r\n\"q\"\"t\",NaN,4,false\r\n");
    }

    #[test]
    fn json_keeps_column_order() {
        let cfg = RunConfig::default();
        let h = Header { command: "test", config: &cfg, seed: 5, version: "0" };
        let mut buf = Vec::new();
        write_report(&mut buf, &h, &sample(), Format::Json).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["header"]["seed"], 5);
        let row = v["rows"][0].as_object().unwrap();
        let keys: Vec<&String> = row.keys().collect();
        assert_eq!(keys, ["name", "x", "k", "satisfied"]);
        assert_eq!(v["rows"][1]["x"], "NaN");
    }

    #[test]
    fn counts_violations() {
        assert_eq!(sample().violations, 1);
        assert_eq!(sample().values("k"), vec![3.0, 4.0]);
    }
}
