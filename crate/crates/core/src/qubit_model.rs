//! Transmon-limit analytic model of the split transmon with Majorana
//! couplings across both junctions.
//!
//! The qubit is treated as a harmonic oscillator of frequency
//! ω_p(f) = √(8 E_C E_J(f)). Each oscillator level n carries a 2×2 parity
//! block ½[[ω_eo, ω_M], [ω_M, −ω_eo]] mixing the even/odd charge-parity
//! states through the Majorana term; the two copies of the block (even and
//! odd quasiparticle parity) are identical, so one block describes a level.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Below this E_J/E_C the asymptotic formulas are rejected outright.
pub const MIN_TRANSMON_RATIO: f64 = 1.0;
/// Below this E_J/E_C results are reported but flagged as marginal.
pub const WARN_TRANSMON_RATIO: f64 = 10.0;

/// cos(πx), exact at integer and half-integer x.
pub fn cos_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 {
        1.0
    } else if r == 1.0 {
        -1.0
    } else if r == 0.5 || r == 1.5 {
        0.0
    } else {
        (PI * r).cos()
    }
}

/// sin(πx), exact at integer and half-integer x.
pub fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        0.0
    } else if r == 0.5 {
        1.0
    } else if r == 1.5 {
        -1.0
    } else {
        (PI * r).sin()
    }
}

/// Device parameters. All energies are GHz (E/h).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitParams {
    pub e_c: f64,
    pub e_j0: f64,
    pub e_j1: f64,
    pub e_m0: f64,
    pub e_m1: f64,
    /// Dimensionless gate charge.
    pub n_g: f64,
    /// Reduced flux Φ_e/Φ₀.
    pub flux: f64,
    /// Superconducting gap Δ.
    pub gap: f64,
    /// Temperature k_B T / h.
    pub temperature: f64,
}

impl QubitParams {
    /// Splits a total Josephson energy by asymmetry d so that E_J0 ≥ E_J1 for d ≥ 0.
    pub fn split_josephson(e_j_sum: f64, asymmetry: f64) -> (f64, f64) {
        (
            0.5 * e_j_sum * (1.0 + asymmetry),
            0.5 * e_j_sum * (1.0 - asymmetry),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("E_C", self.e_c),
            ("E_J0", self.e_j0),
            ("E_J1", self.e_j1),
            ("E_M0", self.e_m0),
            ("E_M1", self.e_m1),
            ("n_g", self.n_g),
            ("f", self.flux),
            ("Delta", self.gap),
            ("T", self.temperature),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "{name} must be finite, got {v}"
            )));
        }
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParams(msg.to_string()))
            }
        };
        check(self.e_c > 0.0, "E_C must be > 0")?;
        check(
            self.e_j0 >= 0.0 && self.e_j1 >= 0.0,
            "E_J0, E_J1 must be >= 0",
        )?;
        check(self.e_j_sum() > 0.0, "E_J0 + E_J1 must be > 0")?;
        check(
            self.e_m0 >= 0.0 && self.e_m1 >= 0.0,
            "E_M0, E_M1 must be >= 0",
        )?;
        check(self.gap > 0.0, "Delta must be > 0")?;
        check(self.temperature > 0.0, "T must be > 0")
    }

    pub fn e_j_sum(&self) -> f64 {
        self.e_j0 + self.e_j1
    }

    pub fn asymmetry(&self) -> f64 {
        (self.e_j0 - self.e_j1) / self.e_j_sum()
    }

    /// Mean Majorana coupling (E_M0 + E_M1)/2.
    pub fn e_m(&self) -> f64 {
        0.5 * (self.e_m0 + self.e_m1)
    }
}

/// Flux-dependent effective junction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionGeometry {
    pub e_j_eff: f64,
    pub asymmetry: f64,
    /// Phase shift ϑ, tan ϑ = d tan(πf), on the branch where φ = 0 is the
    /// potential minimum.
    pub theta: f64,
    pub omega_p: f64,
}

impl JunctionGeometry {
    /// Fails when the plasma frequency vanishes (d = 0 at half flux).
    pub fn require_plasma(&self, flux: f64) -> Result<()> {
        if self.omega_p > 0.0 {
            Ok(())
        } else {
            Err(Error::VanishingPlasmaFrequency { f: flux })
        }
    }
}

pub fn junction_geometry(p: &QubitParams) -> Result<JunctionGeometry> {
    p.validate()?;
    let d = p.asymmetry();
    let (c, s) = (cos_pi(p.flux), sin_pi(p.flux));
    let e_j_eff = p.e_j_sum() * (c * c + d * d * s * s).sqrt();
    Ok(JunctionGeometry {
        e_j_eff,
        asymmetry: d,
        theta: (d * s).atan2(c),
        omega_p: (8.0 * p.e_c * e_j_eff).sqrt(),
    })
}

fn check_transmon(e_c: f64, e_j: f64) -> Result<()> {
    if !(e_c > 0.0) || !(e_j > 0.0) {
        return Err(domain(format!(
            "E_C and E_J must be positive, got E_C={e_c}, E_J={e_j}"
        )));
    }
    let ratio = e_j / e_c;
    if ratio < MIN_TRANSMON_RATIO {
        return Err(Error::NotTransmon {
            ratio,
            min: MIN_TRANSMON_RATIO,
        });
    }
    Ok(())
}

/// Charge-dispersion amplitude ε₀ of the transmon ground state.
pub fn charge_dispersion(e_c: f64, e_j: f64) -> Result<f64> {
    check_transmon(e_c, e_j)?;
    let x = 8.0 * e_j / e_c;
    let omega_p = (8.0 * e_c * e_j).sqrt();
    Ok(4.0 * (2.0 / PI).sqrt() * omega_p * x.powf(0.25) * (-x.sqrt()).exp())
}

/// Signed even–odd ground-state splitting ω_eo = ε₀ cos(2π n_g).
pub fn even_odd_splitting(e_c: f64, e_j: f64, n_g: f64) -> Result<f64> {
    Ok(charge_dispersion(e_c, e_j)? * cos_pi(2.0 * n_g))
}

/// First-excited-level splitting ω_eo⁽¹⁾ = −4 ω_eo ω_p / E_C.
pub fn excited_even_odd_splitting(e_c: f64, e_j: f64, n_g: f64) -> Result<f64> {
    let omega_eo = even_odd_splitting(e_c, e_j, n_g)?;
    let omega_p = (8.0 * e_c * e_j).sqrt();
    Ok(-4.0 * omega_eo * omega_p / e_c)
}

/// Leading-order Majorana splitting 2 Σ_j E_Mj cos[(πf ∓ ϑ)/2].
pub fn majorana_splitting(e_m0: f64, e_m1: f64, flux: f64, theta: f64) -> f64 {
    let t = theta / PI;
    2.0 * (e_m0 * cos_pi(0.5 * (flux - t)) + e_m1 * cos_pi(0.5 * (flux + t)))
}

/// Majorana splitting of oscillator level `level` including the
/// [1 − (n + ½) E_C/ω_p] reduction of the diagonal cos(φ̂/2) element.
pub fn majorana_splitting_at_level(
    e_m0: f64,
    e_m1: f64,
    flux: f64,
    theta: f64,
    level: usize,
    e_c: f64,
    omega_p: f64,
) -> f64 {
    let reduction = 1.0 - (level as f64 + 0.5) * e_c / omega_p;
    reduction * majorana_splitting(e_m0, e_m1, flux, theta)
}

/// Eigen-decomposition of one parity block ½[[ω_eo, ω_M], [ω_M, −ω_eo]].
///
/// Eigenvalues are ±ω′/2 with eigenvectors (a±, b±).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridLevelSolution {
    pub level: usize,
    pub omega_eo: f64,
    pub omega_m: f64,
    pub omega_eo_prime: f64,
    pub a_plus: f64,
    pub b_plus: f64,
    pub a_minus: f64,
    pub b_minus: f64,
    /// Set when ω_eo = ω_M = 0 and the coefficients are a limit choice.
    pub degenerate: bool,
}

impl HybridLevelSolution {
    pub fn energy_plus(&self) -> f64 {
        0.5 * self.omega_eo_prime
    }

    pub fn energy_minus(&self) -> f64 {
        -0.5 * self.omega_eo_prime
    }

    /// (2a⁺b⁺)², weight of the zero-frequency parity-switching channel.
    pub fn weight_zero(&self) -> f64 {
        (2.0 * self.a_plus * self.b_plus).powi(2)
    }

    /// (a⁺b⁻ + a⁻b⁺)², weight of the channel at ω′.
    pub fn weight_split(&self) -> f64 {
        (self.a_plus * self.b_minus + self.a_minus * self.b_plus).powi(2)
    }
}

pub fn hybrid_level_solution(level: usize, omega_eo: f64, omega_m: f64) -> HybridLevelSolution {
    let prime = omega_eo.hypot(omega_m);
    let base = HybridLevelSolution {
        level,
        omega_eo,
        omega_m,
        omega_eo_prime: prime,
        a_plus: 1.0,
        b_plus: 0.0,
        a_minus: 0.0,
        b_minus: 1.0,
        degenerate: false,
    };
    if omega_m == 0.0 {
        // Limit ω_M → 0⁺.
        return if omega_eo > 0.0 {
            base
        } else if omega_eo < 0.0 {
            HybridLevelSolution {
                a_plus: 0.0,
                b_plus: 1.0,
                a_minus: -1.0,
                b_minus: 0.0,
                ..base
            }
        } else {
            HybridLevelSolution {
                degenerate: true,
                ..base
            }
        };
    }
    // ω_eo ± ω′ without cancellation.
    let m2 = omega_m * omega_m;
    let sum = if omega_eo >= 0.0 {
        omega_eo + prime
    } else {
        m2 / (prime - omega_eo)
    };
    let diff = if omega_eo <= 0.0 {
        omega_eo - prime
    } else {
        -m2 / (prime + omega_eo)
    };
    let np = omega_m.hypot(sum);
    let nm = omega_m.hypot(diff);
    HybridLevelSolution {
        a_plus: sum / np,
        b_plus: omega_m / np,
        a_minus: diff / nm,
        b_minus: omega_m / nm,
        ..base
    }
}

/// Largest level accepted by the expanded cos/sin(φ̂/2) matrix elements.
pub const MAX_EXPANSION_LEVEL: usize = 3;

fn expansion_scale(m: usize, n: usize, e_c: f64, omega_p: f64) -> Result<f64> {
    for level in [m, n] {
        if level > MAX_EXPANSION_LEVEL {
            return Err(Error::LevelOutOfRange {
                level,
                max: MAX_EXPANSION_LEVEL,
            });
        }
    }
    let ratio = e_c / omega_p;
    if !(ratio > 0.0 && ratio < 0.25) {
        return Err(domain(format!(
            "E_C/omega_p must lie in (0, 1/4), got {ratio}"
        )));
    }
    Ok(ratio)
}

/// Second-order expansion in √(E_C/ω_p) of ⟨ψ_m| g((φ + φ̂)/2) |ψ_n⟩ for
/// g = cos (`even`) or sin, in terms of (g(φ/2), g'(φ/2)).
fn half_angle_element(m: usize, n: usize, ratio: f64, value: f64, derivative: f64) -> f64 {
    let s = ratio.sqrt();
    let (mf, nf) = (m as f64, n as f64);
    if m == n {
        (1.0 - (nf + 0.5) * ratio) * value
    } else if m + 1 == n {
        s * nf.sqrt() * derivative
    } else if m == n + 1 {
        s * mf.sqrt() * derivative
    } else if m + 2 == n {
        -0.5 * ratio * (nf * (nf - 1.0)).sqrt() * value
    } else if m == n + 2 {
        -0.5 * ratio * ((nf + 1.0) * (nf + 2.0)).sqrt() * value
    } else {
        0.0
    }
}

/// ⟨ψ_m| cos((φ± + φ̂)/2) |ψ_n⟩ to order E_C/ω_p.
pub fn cos_half_matrix_element(
    m: usize,
    n: usize,
    phase: f64,
    e_c: f64,
    omega_p: f64,
) -> Result<f64> {
    let ratio = expansion_scale(m, n, e_c, omega_p)?;
    let half = phase / (2.0 * PI);
    Ok(half_angle_element(m, n, ratio, cos_pi(half), -sin_pi(half)))
}

/// ⟨ψ_m| sin((φ± + φ̂)/2) |ψ_n⟩ to order E_C/ω_p.
pub fn sin_half_matrix_element(
    m: usize,
    n: usize,
    phase: f64,
    e_c: f64,
    omega_p: f64,
) -> Result<f64> {
    let ratio = expansion_scale(m, n, e_c, omega_p)?;
    let half = phase / (2.0 * PI);
    Ok(half_angle_element(m, n, ratio, sin_pi(half), cos_pi(half)))
}

/// Optional corrections to the harmonic spectrum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    /// Use ω₀₁ = ω_p − E_C instead of ω_p.
    pub anharmonic: bool,
    /// Apply the level-dependent [1 − (n + ½)E_C/ω_p] factor to ω_M.
    pub level_correction: bool,
}

/// Ground and first-excited parity blocks for a parameter set.
pub fn level_solutions(
    p: &QubitParams,
    opts: SpectrumOptions,
) -> Result<(JunctionGeometry, HybridLevelSolution, HybridLevelSolution)> {
    let geo = junction_geometry(p)?;
    geo.require_plasma(p.flux)?;
    let omega_eo = even_odd_splitting(p.e_c, geo.e_j_eff, p.n_g)?;
    let omega_eo1 = -4.0 * omega_eo * geo.omega_p / p.e_c;
    let omega_m = |level| {
        if opts.level_correction {
            majorana_splitting_at_level(
                p.e_m0,
                p.e_m1,
                p.flux,
                geo.theta,
                level,
                p.e_c,
                geo.omega_p,
            )
        } else {
            majorana_splitting(p.e_m0, p.e_m1, p.flux, geo.theta)
        }
    };
    Ok((
        geo,
        hybrid_level_solution(0, omega_eo, omega_m(0)),
        hybrid_level_solution(1, omega_eo1, omega_m(1)),
    ))
}

/// The four 0 → 1 transition frequencies between hybrid doublets, labelled
/// by the initial (κ) and final (κ′) branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumBranches {
    pub omega_01: f64,
    pub plus_plus: f64,
    pub plus_minus: f64,
    pub minus_plus: f64,
    pub minus_minus: f64,
}

impl SpectrumBranches {
    pub fn from_doublets(omega_01: f64, ground_split: f64, excited_split: f64) -> Self {
        let branch = |kappa: f64, kappa_prime: f64| {
            omega_01 + 0.5 * (kappa_prime * excited_split - kappa * ground_split)
        };
        Self {
            omega_01,
            plus_plus: branch(1.0, 1.0),
            plus_minus: branch(1.0, -1.0),
            minus_plus: branch(-1.0, 1.0),
            minus_minus: branch(-1.0, -1.0),
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.plus_plus,
            self.plus_minus,
            self.minus_plus,
            self.minus_minus,
        ]
    }
}

pub fn excitation_spectrum(p: &QubitParams, opts: SpectrumOptions) -> Result<SpectrumBranches> {
    let (geo, ground, excited) = level_solutions(p, opts)?;
    let omega_01 = if opts.anharmonic {
        geo.omega_p - p.e_c
    } else {
        geo.omega_p
    };
    Ok(SpectrumBranches::from_doublets(
        omega_01,
        ground.omega_eo_prime,
        excited.omega_eo_prime,
    ))
}
