//! CSV serialization of sweep results.
//!
//! Files start with `# key = value` metadata lines, followed by a header
//! row and one data row per (overlay, grid point). Floats use the shortest
//! decimal that round-trips; failed cells are left empty.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rates::rate_per_second;
use crate::sweep::SweepResult;

/// Rate unit conversion applied when writing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RateUnits {
    pub per_second: bool,
    pub two_pi: bool,
}

/// Shortest round-trip representation, switching to exponent form for
/// very small or very large magnitudes.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return String::new();
    }
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn write_csv<W: Write>(result: &SweepResult, units: RateUnits, mut out: W) -> Result<()> {
    let mut meta = result.metadata.clone();
    if result.quantity.is_rate() {
        let unit = match (units.per_second, units.two_pi) {
            (false, _) => "GHz",
            (true, false) => "1/s (GHz x 1e9)",
            (true, true) => "1/s (GHz x 2pi x 1e9)",
        };
        meta.push(("gamma_units".into(), unit.into()));
    }
    for (k, v) in &meta {
        writeln!(out, "# {k} = {v}")?;
    }

    let with_error = result.has_errors();
    let mut header = vec!["overlay_E_M".to_string(), result.axis.name().to_string()];
    header.extend(result.columns().iter().map(|c| c.to_string()));
    if result.quantity.is_rate() {
        header.push("floored".into());
    }
    if with_error {
        header.push("error".into());
    }

    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    for row in &result.rows {
        let mut rec = vec![format_float(row.overlay_e_m), format_float(row.x)];
        for (i, &v) in row.values.iter().enumerate() {
            let v = if i == 0 && result.quantity.is_rate() && units.per_second {
                rate_per_second(v, units.two_pi)
            } else {
                v
            };
            rec.push(format_float(v));
        }
        if result.quantity.is_rate() {
            rec.push(row.floored.map(|f| f.to_string()).unwrap_or_default());
        }
        if with_error {
            rec.push(row.error.clone().unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(result: &SweepResult, units: RateUnits) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(result, units, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
}

/// A CSV file read back: metadata, header and raw cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Cell as a number; empty cells read as NaN.
    pub fn value(&self, row: usize, col: usize) -> Result<f64> {
        let cell = self.rows[row][col].trim();
        if cell.is_empty() {
            return Ok(f64::NAN);
        }
        cell.parse().map_err(|_| {
            Error::Config(format!(
                "row {row}, column {}: '{cell}' is not a number",
                self.header[col]
            ))
        })
    }
}

pub fn parse_csv(text: &str) -> Result<CsvTable> {
    let metadata = text
        .lines()
        .filter_map(|l| l.strip_prefix('#'))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.iter().map(str::to_string).collect();
    let rows = reader
        .records()
        .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(CsvTable {
        metadata,
        header,
        rows,
    })
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    parse_csv(&std::fs::read_to_string(path)?)
}
