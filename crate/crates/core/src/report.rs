//! Structured command results and their plain, JSON and CSV renderings.
//!
//! CSV uses three columns `section,key,value`:
//!
//! | section    | key                  | value                     |
//! |------------|----------------------|---------------------------|
//! | `meta`     | `command`, `status`  | command line, status name |
//! | `input`    | input name           | value                     |
//! | `output`   | output name          | value                     |
//! | `citation` | position             | citation                  |
//! | `column`   | position             | table column name         |
//! | `row:<i>`  | table column name    | cell                      |

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    #[default]
    Ok,
    CriterionFailed,
    Discrepancy,
    NumericalError,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::CriterionFailed => "criterion_failed",
            Status::Discrepancy => "discrepancy",
            Status::NumericalError => "numerical_error",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Status {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ok" => Ok(Status::Ok),
            "criterion_failed" => Ok(Status::CriterionFailed),
            "discrepancy" => Ok(Status::Discrepancy),
            "numerical_error" => Ok(Status::NumericalError),
            _ => Err(ReportError::Parse(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub citations: Vec<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Table>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Format::Plain),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?}; use plain, json or csv")),
        }
    }
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn output(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.outputs.insert(key.into(), value.to_string());
        self
    }

    pub fn cite(&mut self, citation: impl Into<String>) -> &mut Self {
        let c = citation.into();
        if !self.citations.contains(&c) {
            self.citations.push(c);
        }
        self
    }

    /// Records `expected.<key>` and `computed.<key>` and marks the report as a
    /// discrepancy.
    pub fn discrepancy(&mut self, key: &str, expected: impl ToString, computed: impl ToString) -> &mut Self {
        self.outputs.insert(format!("expected.{key}"), expected.to_string());
        self.outputs.insert(format!("computed.{key}"), computed.to_string());
        self.escalate(Status::Discrepancy)
    }

    /// Raises the status, keeping the more severe of the two. Numerical
    /// errors outrank discrepancies, which outrank failed criteria.
    pub fn escalate(&mut self, status: Status) -> &mut Self {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::CriterionFailed => 1,
            Status::Discrepancy => 2,
            Status::NumericalError => 3,
        };
        if rank(status) > rank(self.status) {
            self.status = status;
        }
        self
    }

    pub fn render(&self, format: Format) -> Result<String, ReportError> {
        match format {
            Format::Plain => Ok(self.to_plain()),
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_plain(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}  [{}]", self.command, self.status);
        let width = self.inputs.keys().chain(self.outputs.keys()).map(|k| k.chars().count()).max().unwrap_or(0);
        for (title, map) in [("inputs", &self.inputs), ("outputs", &self.outputs)] {
            if map.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{title}:");
            for (k, v) in map {
                let _ = writeln!(out, "  {k:<width$}  {v}");
            }
        }
        if let Some(table) = &self.table {
            let mut widths: Vec<usize> = table.columns.iter().map(|c| c.chars().count()).collect();
            for row in &table.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect();
                format!("  {}", parts.join("  "))
            };
            let _ = writeln!(out, "table:");
            let _ = writeln!(out, "{}", line(&table.columns));
            for row in &table.rows {
                let _ = writeln!(out, "{}", line(row));
            }
        }
        if !self.citations.is_empty() {
            let _ = writeln!(out, "citations:");
            for c in &self.citations {
                let _ = writeln!(out, "  - {c}");
            }
        }
        out
    }

    fn to_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "key", "value"])?;
        w.write_record(["meta", "command", &self.command])?;
        w.write_record(["meta", "status", self.status.as_str()])?;
        for (k, v) in &self.inputs {
            w.write_record(["input", k, v])?;
        }
        for (k, v) in &self.outputs {
            w.write_record(["output", k, v])?;
        }
        for (i, c) in self.citations.iter().enumerate() {
            w.write_record(["citation", &i.to_string(), c])?;
        }
        if let Some(table) = &self.table {
            for (i, c) in table.columns.iter().enumerate() {
                w.write_record(["column", &i.to_string(), c])?;
            }
            for (i, row) in table.rows.iter().enumerate() {
                let section = format!("row:{i}");
                for (c, cell) in table.columns.iter().zip(row) {
                    w.write_record([section.as_str(), c, cell])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| ReportError::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_csv(text: &str) -> Result<Self, ReportError> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut report = Report::default();
        let mut columns: Vec<String> = Vec::new();
        let mut rows: BTreeMap<usize, BTreeMap<String, String>> = BTreeMap::new();
        for record in r.records() {
            let record = record?;
            let field = |i: usize| record.get(i).unwrap_or_default().to_string();
            let (section, key, value) = (field(0), field(1), field(2));
            match section.as_str() {
                "meta" if key == "command" => report.command = value,
                "meta" if key == "status" => report.status = value.parse()?,
                "input" => {
                    report.inputs.insert(key, value);
                }
                "output" => {
                    report.outputs.insert(key, value);
                }
                "citation" => report.citations.push(value),
                "column" => columns.push(value),
                s if s.starts_with("row:") => {
                    let i: usize = s[4..].parse().map_err(|_| ReportError::Parse(format!("bad row section {s:?}")))?;
                    rows.entry(i).or_default().insert(key, value);
                }
                _ => return Err(ReportError::Parse(format!("unknown section {section:?}"))),
            }
        }
        if !columns.is_empty() || !rows.is_empty() {
            let rows = rows
                .into_values()
                .map(|mut cells| columns.iter().map(|c| cells.remove(c).unwrap_or_default()).collect())
                .collect();
            report.table = Some(Table { columns, rows });
        }
        Ok(report)
    }
}
