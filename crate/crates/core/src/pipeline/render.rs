use serde::Serialize;

use super::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Flat rows for CSV and text rendering.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Rows {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// A report that renders as JSON (the full structure) or as flat rows.
pub trait Report: Serialize {
    fn rows(&self) -> Rows;
}

pub fn render<R: Report>(report: &R, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => to_csv(&report.rows()),
        OutputFormat::Table => to_table(&report.rows()),
    }
}

fn full(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => v.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

pub fn to_csv(rows: &Rows) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&rows.header).expect("in-memory write");
    for r in &rows.rows {
        w.write_record(r.iter().map(full)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

pub fn to_table(rows: &Rows) -> String {
    let cells: Vec<Vec<String>> = rows
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c {
                    Cell::Float(v) => format!("{v:.3}"),
                    Cell::Empty => "NA".to_owned(),
                    other => full(other),
                })
                .collect()
        })
        .collect();
    let mut width: Vec<usize> = rows.header.iter().map(|h| h.chars().count()).collect();
    for r in &cells {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |fields: Vec<&str>| {
        let padded: Vec<String> = fields.iter().zip(&width).map(|(f, w)| format!("{f:>w$}")).collect();
        padded.join("  ").trim_end().to_owned() + "\n"
    };
    let mut out = line(rows.header.clone());
    for r in &cells {
        out += &line(r.iter().map(String::as_str).collect());
    }
    out
}
