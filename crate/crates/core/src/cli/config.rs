//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Keys are
//! case-sensitive; unknown keys are rejected. Presets are applied first and
//! every other key overrides them.
//!
//! | key | meaning |
//! |-----|---------|
//! | `preset` | `fig2a`, `fig2b` or `fig3` |
//! | `E_C`, `E_J0`, `E_J1`, `E_M0`, `E_M1` | energies in GHz |
//! | `E_J`, `d` | total Josephson energy (GHz) and asymmetry; re-split E_J0/E_J1 |
//! | `E_M` | sets E_M0 = E_M1 |
//! | `n_g`, `f` | gate charge, reduced flux |
//! | `Delta_ueV` / `Delta_GHz` | superconducting gap |
//! | `T_mK` / `T_GHz` | temperature |
//! | `axis` | `n_g`, `f`, `ej_over_ec`, `E_M`, `T` |
//! | `grid_start`, `grid_stop`, `grid_points` | linear grid |
//! | `quantity` | `spectrum`, `splittings`, `rate_ground`, `rate_excited` |
//! | `overlay_E_M` | comma-separated E_M overlay values (GHz) |
//! | `omega_floor` | S_qp floor in GHz |
//! | `anharmonic`, `level_correction`, `exact`, `per_second`, `two_pi` | booleans |
//! | `out`, `svg` | output paths |

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::qubit_model::QubitParams;
use crate::sweep::{linspace, preset, Axis, Overlay, Quantity, SweepSpec};
use crate::units::{energy_from_microelectronvolt, temperature_from_millikelvin, Energy};

const KNOWN_KEYS: &[&str] = &[
    "preset",
    "E_C",
    "E_J0",
    "E_J1",
    "E_J",
    "d",
    "E_M0",
    "E_M1",
    "E_M",
    "n_g",
    "f",
    "Delta_ueV",
    "Delta_GHz",
    "T_mK",
    "T_GHz",
    "axis",
    "grid_start",
    "grid_stop",
    "grid_points",
    "quantity",
    "overlay_E_M",
    "omega_floor",
    "anharmonic",
    "level_correction",
    "exact",
    "per_second",
    "two_pi",
    "out",
    "svg",
];

/// Parsed `key = value` pairs in file order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::Config(format!(
                    "line {}: unknown key '{key}'",
                    lineno + 1
                )));
            }
            if entries.iter().any(|(k, _)| k == key) {
                return Err(Error::Config(format!(
                    "line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<Option<bool>> {
        self.get(key)
            .map(|v| match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(Error::Config(format!("{key}: '{v}' is not a boolean"))),
            })
            .transpose()
    }
}

/// Command-line settings that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct CliOverrides {
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub omega_floor: Option<f64>,
    pub anharmonic: bool,
    pub exact: bool,
    pub per_second: bool,
    pub two_pi: bool,
}

/// Fully resolved run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: SweepSpec,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub per_second: bool,
    pub two_pi: bool,
}

fn set_params(cfg: &ConfigFile, p: &mut QubitParams) -> Result<()> {
    let direct: [(&str, &mut f64); 7] = [
        ("E_C", &mut p.e_c),
        ("E_J0", &mut p.e_j0),
        ("E_J1", &mut p.e_j1),
        ("E_M0", &mut p.e_m0),
        ("E_M1", &mut p.e_m1),
        ("n_g", &mut p.n_g),
        ("f", &mut p.flux),
    ];
    for (key, slot) in direct {
        if let Some(v) = cfg.number(key)? {
            *slot = v;
        }
    }
    let total = cfg.number("E_J")?;
    let asym = cfg.number("d")?;
    if total.is_some() || asym.is_some() {
        let sum = total.unwrap_or(p.e_j_sum());
        let d = asym.unwrap_or(p.asymmetry());
        if !(-1.0..=1.0).contains(&d) {
            return Err(Error::Config(format!("d must lie in [-1, 1], got {d}")));
        }
        (p.e_j0, p.e_j1) = QubitParams::split_josephson(sum, d);
    }
    if let Some(v) = cfg.number("E_M")? {
        p.e_m0 = v;
        p.e_m1 = v;
    }
    match (cfg.number("Delta_ueV")?, cfg.number("Delta_GHz")?) {
        (Some(_), Some(_)) => {
            return Err(Error::Config(
                "give only one of Delta_ueV, Delta_GHz".into(),
            ))
        }
        (Some(v), None) => p.gap = energy_from_microelectronvolt(v)?.ghz(),
        (None, Some(v)) => p.gap = Energy::from_ghz(v)?.ghz(),
        (None, None) => {}
    }
    match (cfg.number("T_mK")?, cfg.number("T_GHz")?) {
        (Some(_), Some(_)) => return Err(Error::Config("give only one of T_mK, T_GHz".into())),
        (Some(v), None) => p.temperature = temperature_from_millikelvin(v)?.ghz(),
        (None, Some(v)) => p.temperature = Energy::from_ghz(v)?.ghz(),
        (None, None) => {}
    }
    Ok(())
}

impl RunConfig {
    /// Resolves a run from an optional config file, CLI overrides and the
    /// quantity implied by the subcommand.
    pub fn resolve(
        cfg: &ConfigFile,
        cli: &CliOverrides,
        default_quantity: Quantity,
    ) -> Result<Self> {
        let preset_name = cli
            .preset
            .clone()
            .or_else(|| cfg.get("preset").map(str::to_string));
        let mut spec = match &preset_name {
            Some(name) => preset(name)?,
            None => {
                let mut s = crate::sweep::preset_fig2a();
                s.name = "custom".into();
                s.assumptions.clear();
                s
            }
        };
        if preset_name.is_none() || !compatible(spec.quantity, default_quantity) {
            spec.quantity = default_quantity;
        }

        set_params(cfg, &mut spec.base)?;
        if let Some(axis) = cfg.get("axis") {
            spec.axis = axis.parse::<Axis>()?;
        }
        if let Some(q) = cfg.get("quantity") {
            let q = q.parse::<Quantity>()?;
            if !compatible(q, default_quantity) {
                return Err(Error::Config(format!(
                    "quantity '{}' is not produced by this command",
                    q.name()
                )));
            }
            spec.quantity = q;
        }
        let grid_keys = [
            cfg.number("grid_start")?,
            cfg.number("grid_stop")?,
            cfg.number("grid_points")?,
        ];
        if grid_keys.iter().any(Option::is_some) {
            let [Some(start), Some(stop), Some(n)] = grid_keys else {
                return Err(Error::Config(
                    "grid_start, grid_stop and grid_points go together".into(),
                ));
            };
            if n < 1.0 || n.fract() != 0.0 {
                return Err(Error::Config(format!(
                    "grid_points must be a positive integer, got {n}"
                )));
            }
            spec.grid = linspace(start, stop, n as usize);
        }
        if let Some(list) = cfg.get("overlay_E_M") {
            spec.overlays =
                list.split(',')
                    .map(|v| {
                        v.trim().parse::<f64>().map(Overlay::majorana).map_err(|_| {
                            Error::Config(format!("overlay_E_M: '{v}' is not a number"))
                        })
                    })
                    .collect::<Result<_>>()?;
        }
        if let Some(v) = cli.omega_floor.or(cfg.number("omega_floor")?) {
            spec.options.omega_floor = Some(v);
        }
        spec.options.spectrum.anharmonic =
            cli.anharmonic || cfg.flag("anharmonic")?.unwrap_or(false);
        spec.options.spectrum.level_correction = cfg.flag("level_correction")?.unwrap_or(false);
        spec.options.exact = cli.exact || cfg.flag("exact")?.unwrap_or(false);

        let cfg_path = |k: &str| cfg.get(k).map(PathBuf::from);
        let run = RunConfig {
            out: cli.out.clone().or_else(|| cfg_path("out")),
            svg: cli.svg.clone().or_else(|| cfg_path("svg")),
            per_second: cli.per_second || cfg.flag("per_second")?.unwrap_or(false),
            two_pi: cli.two_pi || cfg.flag("two_pi")?.unwrap_or(false),
            spec,
        };
        if run.two_pi && !run.per_second {
            return Err(Error::Config(
                "two_pi only applies together with per_second".into(),
            ));
        }
        run.spec.validate()?;
        Ok(run)
    }
}

fn compatible(q: Quantity, command_default: Quantity) -> bool {
    q.is_rate() == command_default.is_rate()
}
