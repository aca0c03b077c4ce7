use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::fmt_float;

/// Column order of the CSV report.
pub const CSV_COLUMNS: [&str; 13] = [
    "task",
    "generator",
    "alpha",
    "beta",
    "p",
    "N",
    "value",
    "bound",
    "verdict",
    "slack",
    "residual",
    "iterations",
    "seed",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    /// Condition matrix: one line per condition, one column per `(p, α)`.
    Matrix,
}

/// One output row. `verdict` is `pass`, `fail`, `unproven` or `error`;
/// `details` only appears in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub struct Row {
    pub task: String,
    pub generator: String,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub p: Option<f64>,
    #[serde(rename = "N")]
    pub n: usize,
    pub value: f64,
    pub bound: Option<f64>,
    pub verdict: String,
    pub slack: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Row {
    fn csv_record(&self) -> [String; 13] {
        let opt = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
        [
            self.task.clone(),
            self.generator.clone(),
            fmt_float(self.alpha),
            opt(self.beta),
            opt(self.p),
            self.n.to_string(),
            fmt_float(self.value),
            opt(self.bound),
            self.verdict.clone(),
            opt(self.slack),
            opt(self.residual),
            self.iterations.map(|i| i.to_string()).unwrap_or_default(),
            self.seed.to_string(),
        ]
    }
}

/// Writes rows as CSV (fixed columns) or as a JSON array. `Matrix` renders
/// the condition matrix of the `conditions` rows.
pub fn write_rows<W: Write>(rows: &[Row], format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_COLUMNS)?;
            for row in rows {
                w.write_record(row.csv_record())?;
            }
            w.flush()
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)
        }
        Format::Matrix => {
            let mut out = out;
            out.write_all(render_matrix(rows).as_bytes())
        }
    }
}

/// Table with one line per condition and one column per `(p, α)` cell of
/// the `conditions` rows (largest `N` per cell). Entries are `holds`,
/// `fails@k` (first failing index) or `-` when not evaluated.
pub fn render_matrix(rows: &[Row]) -> String {
    let mut columns: Vec<(String, &Row)> = Vec::new();
    for row in rows.iter().filter(|r| r.task == "conditions") {
        let key = format!(
            "p={} a={} N={}",
            row.p.map_or("-".to_string(), |p| p.to_string()),
            row.alpha,
            row.n
        );
        columns.push((key, row));
    }
    let mut table: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (col, (_, row)) in columns.iter().enumerate() {
        let reports = row.details.get("reports").and_then(Value::as_array);
        for report in reports.into_iter().flatten() {
            let id = report
                .get("condition_id")
                .and_then(Value::as_str)
                .unwrap_or("?");
            let label = match report.get("details").and_then(|d| d.get("reading")) {
                Some(Value::String(r)) => format!("{id}[{r}]"),
                _ => id.to_string(),
            };
            let cell = if report
                .get("holds")
                .and_then(Value::as_bool)
                .unwrap_or(false)
            {
                "holds".to_string()
            } else {
                match report.get("first_failure_index").and_then(Value::as_u64) {
                    Some(k) => format!("fails@{k}"),
                    None => "fails".to_string(),
                }
            };
            let entry = table
                .entry(label)
                .or_insert_with(|| vec!["-".to_string(); columns.len()]);
            entry[col] = cell;
        }
        if row.verdict == "error" {
            let entry = table
                .entry("error".to_string())
                .or_insert_with(|| vec!["-".to_string(); columns.len()]);
            entry[col] = "error".to_string();
        }
    }
    let first_width = table
        .keys()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max("condition".len());
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(c, (key, _))| {
            table
                .values()
                .map(|v| v[c].len())
                .max()
                .unwrap_or(0)
                .max(key.len())
        })
        .collect();
    let mut s = format!("{:<first_width$}", "condition");
    for ((key, _), w) in columns.iter().zip(&widths) {
        s.push_str(&format!("  {key:<w$}"));
    }
    s = s.trim_end().to_string();
    s.push('\n');
    for (label, cells) in &table {
        let mut line = format!("{label:<first_width$}");
        for (cell, w) in cells.iter().zip(&widths) {
            line.push_str(&format!("  {cell:<w$}"));
        }
        s.push_str(line.trim_end());
        s.push('\n');
    }
    s
}
