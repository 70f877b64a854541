#![allow(dead_code)]

use std::path::{Path, PathBuf};

use majorana_transmon::cli::output::{parse_csv, CsvTable};
use majorana_transmon::QubitParams;

pub const GAP: f64 = 38.929_626_80;
pub const TEMP: f64 = 2.083_661_912;

/// Reference device: E_C = 1, E_J0 + E_J1 = 8, asymmetry d.
pub fn device(d: f64, e_m: f64, n_g: f64, flux: f64) -> QubitParams {
    let (e_j0, e_j1) = QubitParams::split_josephson(8.0, d);
    QubitParams {
        e_c: 1.0,
        e_j0,
        e_j1,
        e_m0: e_m,
        e_m1: e_m,
        n_g,
        flux,
        gap: GAP,
        temperature: TEMP,
    }
}

/// K₀(x) = ∫₀^∞ exp(−x cosh t) dt by the trapezoid rule. The integrand is
/// analytic and decays double-exponentially, so the error falls off like
/// exp(−c/h).
pub fn k0_quadrature(x: f64) -> f64 {
    let h: f64 = 2e-3;
    let mut sum = 0.5 * (-x).exp();
    let mut t = h;
    loop {
        let v = (-x * t.cosh()).exp();
        sum += v;
        if v < 1e-300 || x * t.cosh() > 745.0 {
            break;
        }
        t += h;
    }
    sum * h
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mtq")
}

pub fn read_table(path: &Path) -> CsvTable {
    parse_csv(&std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display())))
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Largest relative deviation between two tables of identical shape.
/// Returns an error message if the shapes or non-numeric cells differ.
pub fn compare_tables(got: &CsvTable, want: &CsvTable) -> Result<f64, String> {
    if got.header != want.header {
        return Err(format!("header {:?} != {:?}", got.header, want.header));
    }
    if got.rows.len() != want.rows.len() {
        return Err(format!("{} rows != {}", got.rows.len(), want.rows.len()));
    }
    let mut worst: f64 = 0.0;
    for (r, (a, b)) in got.rows.iter().zip(&want.rows).enumerate() {
        for (c, (x, y)) in a.iter().zip(b).enumerate() {
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(x), Ok(y)) => {
                    if x != y {
                        worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
                    }
                }
                _ if x == y => {}
                _ => return Err(format!("row {r} column {}: '{x}' != '{y}'", got.header[c])),
            }
        }
    }
    Ok(worst)
}

/// Column names expected for each sweep command.
pub fn spectrum_header(axis: &str) -> Vec<String> {
    [
        "overlay_E_M",
        axis,
        "branch_pp",
        "branch_pm",
        "branch_mp",
        "branch_mm",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

pub fn rates_header() -> Vec<String> {
    [
        "overlay_E_M",
        "ej_over_ec",
        "gamma",
        "prefactor",
        "weight_0",
        "weight_w",
        "s_at_0",
        "s_at_w",
        "floored",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

/// Schema check shared by the CLI tests: header, row count, metadata block
/// and numeric cells.
pub fn check_schema(table: &CsvTable, header: &[String], rows: usize) -> Result<(), String> {
    if table.header != header {
        return Err(format!("header {:?}", table.header));
    }
    if table.rows.len() != rows {
        return Err(format!("{} rows, expected {rows}", table.rows.len()));
    }
    if table.metadata.is_empty() || !table.metadata.iter().any(|(k, _)| k == "base") {
        return Err("missing metadata block".into());
    }
    for (r, row) in table.rows.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            let ok = if table.header[c] == "floored" {
                cell == "true" || cell == "false"
            } else {
                cell.parse::<f64>().is_ok_and(f64::is_finite)
            };
            if !ok {
                return Err(format!("row {r}, column {}: '{cell}'", table.header[c]));
            }
        }
    }
    Ok(())
}
