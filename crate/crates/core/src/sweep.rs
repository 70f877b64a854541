//! Deterministic parameter sweeps and the built-in figure presets.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::exact_spectrum;
use crate::qubit_model::{
    excitation_spectrum, junction_geometry, level_solutions, QubitParams, SpectrumOptions,
    WARN_TRANSMON_RATIO,
};
use crate::rates::{default_omega_floor, parity_switch_rate_excited, parity_switch_rate_ground};
use crate::units::{energy_from_microelectronvolt, temperature_from_millikelvin};

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    GateCharge,
    Flux,
    /// (E_J0 + E_J1)/E_C at fixed asymmetry.
    EjOverEc,
    /// E_M0 = E_M1 = E_M.
    MajoranaCoupling,
    Temperature,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::GateCharge => "n_g",
            Axis::Flux => "f",
            Axis::EjOverEc => "ej_over_ec",
            Axis::MajoranaCoupling => "E_M",
            Axis::Temperature => "T",
        }
    }

    pub fn apply(self, p: &mut QubitParams, value: f64) {
        match self {
            Axis::GateCharge => p.n_g = value,
            Axis::Flux => p.flux = value,
            Axis::EjOverEc => {
                let d = p.asymmetry();
                (p.e_j0, p.e_j1) = QubitParams::split_josephson(value * p.e_c, d);
            }
            Axis::MajoranaCoupling => {
                p.e_m0 = value;
                p.e_m1 = value;
            }
            Axis::Temperature => p.temperature = value,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Axis::GateCharge,
            Axis::Flux,
            Axis::EjOverEc,
            Axis::MajoranaCoupling,
            Axis::Temperature,
        ]
        .into_iter()
        .find(|a| a.name() == s)
        .ok_or_else(|| Error::Config(format!("unknown axis '{s}'")))
    }
}

/// Output quantity evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    Spectrum,
    RateGround,
    RateExcited,
    Splittings,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Spectrum => "spectrum",
            Quantity::RateGround => "rate_ground",
            Quantity::RateExcited => "rate_excited",
            Quantity::Splittings => "splittings",
        }
    }

    /// Numeric output columns, in order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Quantity::Spectrum => &["branch_pp", "branch_pm", "branch_mp", "branch_mm"],
            Quantity::RateGround | Quantity::RateExcited => &[
                "gamma",
                "prefactor",
                "weight_0",
                "weight_w",
                "s_at_0",
                "s_at_w",
            ],
            Quantity::Splittings => &[
                "omega_eo",
                "omega_M",
                "omega_eo_prime",
                "omega_eo_1",
                "omega_M_1",
                "omega_eo_prime_1",
                "e_j_eff",
                "omega_p",
            ],
        }
    }

    pub fn is_rate(self) -> bool {
        matches!(self, Quantity::RateGround | Quantity::RateExcited)
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Quantity::Spectrum,
            Quantity::RateGround,
            Quantity::RateExcited,
            Quantity::Splittings,
        ]
        .into_iter()
        .find(|q| q.name() == s)
        .ok_or_else(|| Error::Config(format!("unknown quantity '{s}'")))
    }
}

/// A set of parameter overrides applied on top of the base parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overlay {
    pub overrides: Vec<(Axis, f64)>,
}

impl Overlay {
    pub fn majorana(e_m: f64) -> Self {
        Self {
            overrides: vec![(Axis::MajoranaCoupling, e_m)],
        }
    }

    pub fn resolve(&self, base: &QubitParams) -> QubitParams {
        let mut p = *base;
        for &(axis, v) in &self.overrides {
            axis.apply(&mut p, v);
        }
        p
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub spectrum: SpectrumOptions,
    /// Floor for S_qp; `None` means 1e-4·T at each point.
    pub omega_floor: Option<f64>,
    /// Spectra from exact diagonalization instead of the analytic model.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub base: QubitParams,
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub quantity: Quantity,
    pub overlays: Vec<Overlay>,
    pub options: SweepOptions,
    /// Modelling assumptions echoed into the output metadata.
    pub assumptions: Vec<String>,
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config(
                "sweep grid must be finite and strictly ascending".into(),
            ));
        }
        if self.overlays.is_empty() {
            return Err(Error::Config("at least one overlay is required".into()));
        }
        if self.options.exact && self.quantity != Quantity::Spectrum {
            return Err(Error::Config(
                "the exact oracle applies to spectra only".into(),
            ));
        }
        if let Some(floor) = self.options.omega_floor {
            if !(floor > 0.0) {
                return Err(Error::Config(format!(
                    "omega_floor must be > 0, got {floor}"
                )));
            }
        }
        self.base.validate()?;
        for o in &self.overlays {
            o.resolve(&self.base).validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub overlay: usize,
    /// Mean Majorana coupling of the overlay.
    pub overlay_e_m: f64,
    pub x: f64,
    /// One value per quantity column; NaN when `error` is set.
    pub values: Vec<f64>,
    /// Floor flag for rate quantities.
    pub floored: Option<bool>,
    pub error: Option<String>,
    /// E_J(f)/E_C below the transmon warning threshold.
    pub marginal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub metadata: Vec<(String, String)>,
    pub axis: Axis,
    pub quantity: Quantity,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn columns(&self) -> &'static [&'static str] {
        self.quantity.columns()
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }
}

fn evaluate(
    p: &QubitParams,
    quantity: Quantity,
    opts: &SweepOptions,
) -> Result<(Vec<f64>, Option<bool>)> {
    match quantity {
        Quantity::Spectrum => {
            let s = if opts.exact {
                exact_spectrum(p)?
            } else {
                excitation_spectrum(p, opts.spectrum)?
            };
            Ok((s.as_array().to_vec(), None))
        }
        Quantity::RateGround | Quantity::RateExcited => {
            let floor = opts
                .omega_floor
                .unwrap_or_else(|| default_omega_floor(p.temperature));
            let r = if quantity == Quantity::RateGround {
                parity_switch_rate_ground(p, floor)?
            } else {
                parity_switch_rate_excited(p, floor)?
            };
            Ok((
                vec![
                    r.gamma,
                    r.prefactor,
                    r.weight_0,
                    r.weight_w,
                    r.s_at_0,
                    r.s_at_w,
                ],
                Some(r.floored),
            ))
        }
        Quantity::Splittings => {
            let (geo, g, e) = level_solutions(p, opts.spectrum)?;
            Ok((
                vec![
                    g.omega_eo,
                    g.omega_m,
                    g.omega_eo_prime,
                    e.omega_eo,
                    e.omega_m,
                    e.omega_eo_prime,
                    geo.e_j_eff,
                    geo.omega_p,
                ],
                None,
            ))
        }
    }
}

fn fmt_params(p: &QubitParams) -> String {
    format!(
        "E_C={} E_J0={} E_J1={} E_M0={} E_M1={} n_g={} f={} Delta={} T={}",
        p.e_c, p.e_j0, p.e_j1, p.e_m0, p.e_m1, p.n_g, p.flux, p.gap, p.temperature
    )
}

/// Evaluates every (overlay, grid point) pair. Per-point failures are
/// recorded in the row; rows are ordered overlay-major.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let points: Vec<(usize, f64)> = (0..spec.overlays.len())
        .flat_map(|o| spec.grid.iter().map(move |&x| (o, x)))
        .collect();
    let ncols = spec.quantity.columns().len();
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(o, x)| {
            let mut p = spec.overlays[o].resolve(&spec.base);
            spec.axis.apply(&mut p, x);
            let marginal = junction_geometry(&p)
                .map(|g| g.e_j_eff / p.e_c < WARN_TRANSMON_RATIO)
                .unwrap_or(false);
            let (values, floored, error) = match evaluate(&p, spec.quantity, &spec.options) {
                Ok((v, fl)) => (v, fl, None),
                Err(e) => (vec![f64::NAN; ncols], None, Some(e.to_string())),
            };
            SweepRow {
                overlay: o,
                overlay_e_m: p.e_m(),
                x,
                values,
                floored,
                error,
                marginal,
            }
        })
        .collect();

    let mut metadata = vec![
        (
            "tool".to_string(),
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        ),
        ("sweep".to_string(), spec.name.clone()),
        ("quantity".to_string(), spec.quantity.name().to_string()),
        ("axis".to_string(), spec.axis.name().to_string()),
        (
            "grid".to_string(),
            format!(
                "{} points from {} to {}",
                spec.grid.len(),
                spec.grid[0],
                spec.grid[spec.grid.len() - 1]
            ),
        ),
        (
            "units".to_string(),
            "energies and rates in GHz (E/h)".to_string(),
        ),
        ("base".to_string(), fmt_params(&spec.base)),
    ];
    for (i, o) in spec.overlays.iter().enumerate() {
        metadata.push((format!("overlay_{i}"), fmt_params(&o.resolve(&spec.base))));
    }
    metadata.push((
        "anharmonic".to_string(),
        spec.options.spectrum.anharmonic.to_string(),
    ));
    metadata.push((
        "level_correction".to_string(),
        spec.options.spectrum.level_correction.to_string(),
    ));
    metadata.push(("exact".to_string(), spec.options.exact.to_string()));
    if spec.quantity.is_rate() {
        let floor = match spec.options.omega_floor {
            Some(v) => format!("{v} GHz"),
            None => "1e-4*T".to_string(),
        };
        metadata.push(("omega_floor".to_string(), floor));
        let floored = rows.iter().filter(|r| r.floored == Some(true)).count();
        metadata.push((
            "floored_rows".to_string(),
            format!("{floored} rows use S_qp evaluated at the floor frequency instead of 0"),
        ));
    }
    for a in &spec.assumptions {
        metadata.push(("assumption".to_string(), a.clone()));
    }
    let marginal = rows.iter().filter(|r| r.marginal).count();
    if marginal > 0 {
        metadata.push((
            "warning".to_string(),
            format!("{marginal} rows have E_J(f)/E_C < {WARN_TRANSMON_RATIO}; transmon-limit formulas are marginal"),
        ));
    }
    let errors = rows.iter().filter(|r| r.error.is_some()).count();
    if errors > 0 {
        metadata.push(("errors".to_string(), format!("{errors} rows failed")));
    }

    Ok(SweepResult {
        metadata,
        axis: spec.axis,
        quantity: spec.quantity,
        rows,
    })
}

fn fig2_base() -> QubitParams {
    let (e_j0, e_j1) = QubitParams::split_josephson(8.0, 0.25);
    QubitParams {
        e_c: 1.0,
        e_j0,
        e_j1,
        e_m0: 0.0,
        e_m1: 0.0,
        n_g: 0.0,
        flux: 0.0,
        gap: energy_from_microelectronvolt(161.0)
            .expect("constant")
            .ghz(),
        temperature: temperature_from_millikelvin(100.0).expect("constant").ghz(),
    }
}

/// Spectrum versus gate charge, E_C = 1 GHz, E_J = 8 GHz, d = 0.25.
pub fn preset_fig2a() -> SweepSpec {
    SweepSpec {
        name: "fig2a".into(),
        base: fig2_base(),
        axis: Axis::GateCharge,
        grid: linspace(0.0, 1.0, 201),
        quantity: Quantity::Spectrum,
        overlays: [0.0, 0.05, 0.1]
            .into_iter()
            .map(Overlay::majorana)
            .collect(),
        options: SweepOptions::default(),
        assumptions: vec!["flux f = 0 (not stated for this figure)".into()],
    }
}

/// Spectrum versus flux at n_g = 0.
pub fn preset_fig2b() -> SweepSpec {
    SweepSpec {
        name: "fig2b".into(),
        base: fig2_base(),
        axis: Axis::Flux,
        grid: linspace(0.0, 1.0, 201),
        quantity: Quantity::Spectrum,
        overlays: [0.0, 0.5, 1.0].into_iter().map(Overlay::majorana).collect(),
        options: SweepOptions::default(),
        assumptions: Vec::new(),
    }
}

/// Ground-state parity-switching rate versus E_J/E_C for a symmetric split
/// transmon at f = 0.25, T = 100 mK, Δ = 161 μeV.
pub fn preset_fig3() -> SweepSpec {
    let e_c = 0.2;
    SweepSpec {
        name: "fig3".into(),
        base: QubitParams {
            e_c,
            e_j0: 25.0 * e_c,
            e_j1: 25.0 * e_c,
            e_m0: 0.0,
            e_m1: 0.0,
            n_g: 0.0,
            flux: 0.25,
            gap: energy_from_microelectronvolt(161.0)
                .expect("constant")
                .ghz(),
            temperature: temperature_from_millikelvin(100.0).expect("constant").ghz(),
        },
        axis: Axis::EjOverEc,
        grid: linspace(10.0, 100.0, 46),
        quantity: Quantity::RateGround,
        overlays: [0.0, 0.05, 0.1, 0.5]
            .into_iter()
            .map(Overlay::majorana)
            .collect(),
        options: SweepOptions::default(),
        assumptions: vec![
            "symmetric junctions (d = 0)".into(),
            "E_M overlay values {0, 0.05, 0.1, 0.5} GHz chosen for illustration".into(),
        ],
    }
}

pub fn preset(name: &str) -> Result<SweepSpec> {
    match name {
        "fig2a" => Ok(preset_fig2a()),
        "fig2b" => Ok(preset_fig2b()),
        "fig3" => Ok(preset_fig3()),
        other => Err(Error::Config(format!(
            "unknown preset '{other}' (expected fig2a, fig2b or fig3)"
        ))),
    }
}
