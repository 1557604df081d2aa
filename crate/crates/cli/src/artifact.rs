//! Versioned CSV and JSON artifacts.
//!
//! Every CSV starts with a comment line
//! `# imbq-csv schema=<version> kind=<kind> key=value ...`, then a header row.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{Format, SCHEMA_VERSION};
use crate::error::CliError;

pub const CSV_MAGIC: &str = "# imbq-csv";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A table with metadata, written as CSV or JSON.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub kind: &'static str,
    pub meta: Vec<(String, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Artifact {
    pub fn new(kind: &'static str, header: Vec<&'static str>) -> Self {
        Self {
            kind,
            meta: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        write!(buf, "{CSV_MAGIC} schema={SCHEMA_VERSION} kind={}", self.kind)?;
        for (k, v) in &self.meta {
            write!(buf, " {k}={}", v.replace(char::is_whitespace, "_"))?;
        }
        writeln!(buf)?;
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.into_error()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, Value> =
                    self.header.iter().zip(row).map(|(h, c)| (h.to_string(), c.json())).collect();
                Value::Object(obj)
            })
            .collect();
        let meta: BTreeMap<&str, &str> = self.meta.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "meta": meta,
            "rows": rows,
        });
        let mut out = serde_json::to_vec_pretty(&doc)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

/// A parsed CSV artifact: its comment-line metadata and its columns.
#[derive(Debug, Clone)]
pub struct ParsedCsv {
    pub kind: String,
    pub meta: BTreeMap<String, String>,
    pub header: Vec<String>,
    pub records: Vec<csv::StringRecord>,
}

impl ParsedCsv {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let bad = |message: String| CliError::Input {
            path: PathBuf::from(path),
            message,
        };
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        let tags = first
            .strip_prefix(CSV_MAGIC)
            .ok_or_else(|| bad(format!("first line must be a `{CSV_MAGIC} schema=...` comment")))?;
        let mut meta: BTreeMap<String, String> = BTreeMap::new();
        for tag in tags.split_whitespace() {
            let (k, v) = tag
                .split_once('=')
                .ok_or_else(|| bad(format!("comment tag {tag:?} is not key=value")))?;
            meta.insert(k.to_string(), v.to_string());
        }
        let schema = meta.remove("schema").ok_or_else(|| bad("comment line carries no schema version".into()))?;
        if schema != SCHEMA_VERSION.to_string() {
            return Err(bad(format!(
                "schema version {schema} is not supported (expected {SCHEMA_VERSION})"
            )));
        }
        let kind = meta.remove("kind").unwrap_or_default();
        let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(rest.as_bytes());
        let header = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();
        let records = reader.records().collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            kind,
            meta,
            header,
            records,
        })
    }

    pub fn column(&self, names: &[&str]) -> Option<usize> {
        self.header.iter().position(|h| names.contains(&h.as_str()))
    }

    pub fn floats(&self, col: usize, path: &Path) -> Result<Vec<f64>, CliError> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let cell = r.get(col).unwrap_or("").trim();
                cell.parse::<f64>().map_err(|_| CliError::Input {
                    path: path.to_path_buf(),
                    message: format!("row {}: {cell:?} is not a number", i + 1),
                })
            })
            .collect()
    }
}
