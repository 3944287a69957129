//! Report assembly and atomic emission as CSV or JSON.

use crate::error::CliResult;
use doubling_spectrum::dyadic::{ExtendedReal, TorusPoint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Version tag written at the top of every JSON document.
pub const SCHEMA: &str = "doubling-spectrum/v1";

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "DOUBLING_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Result of one command: a JSON body and a CSV table.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub fields: Map<String, Value>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Failed checks; a nonzero count turns into exit status 1.
    pub failures: usize,
}

impl Report {
    pub fn new(command: &'static str, header: Vec<&'static str>) -> Self {
        Report {
            command,
            fields: Map::new(),
            header,
            rows: Vec::new(),
            failures: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: impl serde::Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("report fields serialize");
        self.fields.insert(key.to_string(), v);
        self
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn to_json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!(SCHEMA));
        doc.insert("command".into(), json!(self.command));
        for (k, v) in &self.fields {
            doc.insert(k.clone(), v.clone());
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_io)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_io)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

fn csv_io(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e.to_string())
}

/// Where output goes: the explicit path, else `$DOUBLING_OUTPUT_DIR/<command>.<ext>`,
/// else standard output (`None`).
pub fn destination(explicit: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(|d| PathBuf::from(d).join(format!("{command}.{}", format.extension())))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// `{num, den, value}` for exact rationals.
pub fn rational_json(r: &BigRational) -> Value {
    json!({
        "num": r.numer().to_string(),
        "den": r.denom().to_string(),
        "value": r.to_f64().unwrap_or(f64::NAN),
    })
}

/// Rational points as `{num, den, value}`; binary ones as
/// `{bits, width, value}` with the bits as a hexadecimal string.
pub fn point_json(x: &TorusPoint) -> Value {
    match x {
        TorusPoint::Rational(r) => rational_json(r),
        TorusPoint::BinaryFixed(b) => json!({
            "hex": b.words().iter().map(|w| format!("{w:016x}")).collect::<String>(),
            "width": b.width(),
            "value": b.to_f64(),
        }),
    }
}

/// CSV cell for a point: `p/q` or the decimal approximation.
pub fn point_cell(x: &TorusPoint) -> String {
    match x {
        TorusPoint::Rational(r) => r.to_string(),
        TorusPoint::BinaryFixed(b) => format!("{}", b.to_f64()),
    }
}

pub fn ext_cell(x: ExtendedReal) -> String {
    x.to_string()
}

pub fn f64_cell(x: f64) -> String {
    if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}
