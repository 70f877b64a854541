//! Command-line interface of the `mtq` binary.

pub mod config;
pub mod output;
pub mod svg;
pub mod validate;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::sweep::{run_sweep, Quantity};
use config::{CliOverrides, ConfigFile, RunConfig};
use output::{csv_string, parse_csv, read_csv, CsvTable, RateUnits};
use svg::{Chart, Series};
use validate::{run_validation, Profile};

#[derive(Debug, Parser)]
#[command(
    name = "mtq",
    version,
    about = "Spectra and parity-switching rates of Majorana transmons"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the four hybrid transition branches.
    Spectrum(RunArgs),
    /// Sweep the quasiparticle parity-switching rate.
    Rates(RunArgs),
    /// Run the oracle comparisons and report pass/fail per check.
    Validate {
        #[arg(long, default_value = "default")]
        profile: Profile,
        /// Also write the report as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Render an existing CSV to SVG.
    Figure {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        svg: PathBuf,
        /// Comma-separated value columns to plot (default: all).
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        #[arg(long)]
        log_y: bool,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Built-in parameter set: fig2a, fig2b or fig3.
    #[arg(long)]
    pub preset: Option<String>,
    /// key = value configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// CSV output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Floor for S_qp near zero frequency, GHz.
    #[arg(long, value_name = "GHZ")]
    pub omega_floor: Option<f64>,
    /// Use ω_p − E_C for the 0 → 1 transition.
    #[arg(long)]
    pub anharmonic: bool,
    /// Report rates in 1/s instead of GHz.
    #[arg(long)]
    pub per_second: bool,
    /// With --per-second, include the factor 2π.
    #[arg(long)]
    pub two_pi: bool,
    /// Exact diagonalization instead of the analytic spectrum.
    #[arg(long)]
    pub exact: bool,
}

impl RunArgs {
    fn overrides(&self) -> CliOverrides {
        CliOverrides {
            preset: self.preset.clone(),
            out: self.out.clone(),
            svg: self.svg.clone(),
            omega_floor: self.omega_floor,
            anharmonic: self.anharmonic,
            exact: self.exact,
            per_second: self.per_second,
            two_pi: self.two_pi,
        }
    }
}

/// Builds a chart with one series per (overlay, column).
pub fn chart_from_table(
    table: &CsvTable,
    columns: &[String],
    log_y: bool,
    title: &str,
) -> Result<Chart> {
    let x_col = 1;
    if table.header.len() < 3 || table.header[0] != "overlay_E_M" {
        return Err(Error::Config("CSV does not look like sweep output".into()));
    }
    let value_cols: Vec<usize> = if columns.is_empty() {
        (2..table.header.len())
            .filter(|&i| !matches!(table.header[i].as_str(), "floored" | "error"))
            .collect()
    } else {
        columns
            .iter()
            .map(|c| {
                table
                    .column(c)
                    .ok_or_else(|| Error::Config(format!("no column '{c}' in CSV")))
            })
            .collect::<Result<_>>()?
    };

    let mut overlays: Vec<String> = Vec::new();
    for row in &table.rows {
        if !overlays.contains(&row[0]) {
            overlays.push(row[0].clone());
        }
    }
    let mut series = Vec::new();
    for ov in &overlays {
        for &c in &value_cols {
            let mut points = Vec::new();
            for (r, row) in table.rows.iter().enumerate() {
                if &row[0] == ov {
                    points.push((table.value(r, x_col)?, table.value(r, c)?));
                }
            }
            series.push(Series {
                label: format!("{} E_M={ov}", table.header[c]),
                points,
            });
        }
    }
    let y_label = if value_cols.len() == 1 {
        table.header[value_cols[0]].clone()
    } else {
        "GHz".into()
    };
    Ok(Chart {
        title: title.to_string(),
        x_label: table.header[x_col].clone(),
        y_label,
        log_y,
        series,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(Error::from)
}

fn run_sweep_command(args: &RunArgs, default_quantity: Quantity) -> Result<i32> {
    let cfg = match &args.config {
        Some(path) => ConfigFile::parse(&std::fs::read_to_string(path)?)?,
        None => ConfigFile::default(),
    };
    let run = RunConfig::resolve(&cfg, &args.overrides(), default_quantity)?;
    let result = run_sweep(&run.spec)?;
    let units = RateUnits {
        per_second: run.per_second,
        two_pi: run.two_pi,
    };
    let text = csv_string(&result, units)?;
    match &run.out {
        Some(path) => write_text(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &run.svg {
        let table = parse_csv(&text)?;
        let (columns, log_y) = if result.quantity.is_rate() {
            (vec!["gamma".to_string()], true)
        } else {
            (vec![], false)
        };
        let chart = chart_from_table(&table, &columns, log_y, &run.spec.name)?;
        write_text(path, &chart.render())?;
    }
    for row in result.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!(
            "warning: E_M={} x={}: {}",
            row.overlay_e_m,
            row.x,
            row.error.as_deref().unwrap_or("")
        );
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Spectrum(args) => run_sweep_command(&args, Quantity::Spectrum),
        Command::Rates(args) => run_sweep_command(&args, Quantity::RateGround),
        Command::Validate { profile, json } => {
            let report = run_validation(profile);
            print!("{}", report.lines());
            if let Some(path) = json {
                write_text(&path, &serde_json::to_string_pretty(&report)?)?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Figure {
            input,
            svg,
            columns,
            log_y,
        } => {
            let table = read_csv(&input)?;
            let title = input
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("figure");
            write_text(
                &svg,
                &chart_from_table(&table, &columns, log_y, title)?.render(),
            )?;
            Ok(0)
        }
    }
}

/// Parses arguments and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
