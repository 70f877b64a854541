//! Golden-rule parity-switching rates of the hybrid ground and first
//! excited levels.
//!
//! Rates come out in the same GHz frequency units as the energies. The
//! spectral density diverges logarithmically at zero frequency; the
//! zero-frequency channel is evaluated at a configurable floor frequency
//! and every rate records whether that regularized value contributed.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::qubit_model::{
    level_solutions, sin_half_matrix_element, HybridLevelSolution, JunctionGeometry, QubitParams,
    SpectrumOptions,
};
use crate::specfun::bessel_k0_scaled;

/// Default floor as a fraction of the temperature.
pub const DEFAULT_FLOOR_FRACTION: f64 = 1e-4;

pub fn default_omega_floor(temperature: f64) -> f64 {
    DEFAULT_FLOOR_FRACTION * temperature
}

fn check_bath(temperature: f64, gap: f64) -> Result<()> {
    if !(temperature > 0.0) || !(gap > 0.0) {
        return Err(domain(format!(
            "need T > 0 and Delta > 0, got T={temperature}, Delta={gap}"
        )));
    }
    Ok(())
}

/// S_qp(ω) at ω ≠ 0 without regularization.
pub fn sqp_unfloored(omega: f64, temperature: f64, gap: f64, e_j_eff: f64) -> Result<f64> {
    check_bath(temperature, gap)?;
    if omega == 0.0 || !omega.is_finite() {
        return Err(domain(format!(
            "S_qp diverges or is undefined at omega = {omega}"
        )));
    }
    let x = omega.abs() / (2.0 * temperature);
    let scaled = bessel_k0_scaled(x)?;
    // e^{ω/2T}K₀(|ω|/2T) is eˣK₀(x) for ω > 0 and e^{−x}K₀(x) otherwise.
    let thermal = if omega > 0.0 {
        scaled
    } else {
        scaled * (-2.0 * x).exp()
    };
    Ok(16.0 * e_j_eff / PI * (-gap / temperature).exp() * thermal)
}

/// S_qp(ω) with |ω| clamped from below by `omega_floor`; the flag reports
/// whether the clamp was applied. ω = 0 is treated as 0⁺.
pub fn sqp_flagged(
    omega: f64,
    temperature: f64,
    gap: f64,
    e_j_eff: f64,
    omega_floor: f64,
) -> Result<(f64, bool)> {
    if !(omega_floor > 0.0) {
        return Err(domain(format!(
            "omega_floor must be > 0, got {omega_floor}"
        )));
    }
    if omega.abs() >= omega_floor {
        return Ok((sqp_unfloored(omega, temperature, gap, e_j_eff)?, false));
    }
    let clamped = if omega < 0.0 {
        -omega_floor
    } else {
        omega_floor
    };
    Ok((sqp_unfloored(clamped, temperature, gap, e_j_eff)?, true))
}

pub fn sqp(omega: f64, temperature: f64, gap: f64, e_j_eff: f64, omega_floor: f64) -> Result<f64> {
    sqp_flagged(omega, temperature, gap, e_j_eff, omega_floor).map(|(v, _)| v)
}

/// A parity-switching rate split into its factors:
/// `gamma = prefactor · (weight_0 · s_at_0 + weight_w · s_at_w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateBreakdown {
    pub prefactor: f64,
    pub weight_0: f64,
    pub weight_w: f64,
    pub s_at_0: f64,
    pub s_at_w: f64,
    pub gamma: f64,
    pub omega_eo: f64,
    pub omega_m: f64,
    pub omega_eo_prime: f64,
    /// True when a floor-regularized S_qp value enters `gamma` with nonzero weight.
    pub floored: bool,
}

/// (E_J0 + E_J1)/(2E_J(f)) · (1 − ω_p²(f)/ω_p²(0)).
pub fn flux_prefactor(p: &QubitParams, geo: &JunctionGeometry) -> f64 {
    let sum = p.e_j_sum();
    sum / (2.0 * geo.e_j_eff) * (1.0 - geo.e_j_eff / sum)
}

struct Bracket {
    s_at_0: f64,
    s_at_w: f64,
    floored: bool,
}

fn spectral_bracket(
    p: &QubitParams,
    geo: &JunctionGeometry,
    level: &HybridLevelSolution,
    omega_floor: f64,
) -> Result<Bracket> {
    let (s_at_0, _) = sqp_flagged(0.0, p.temperature, p.gap, geo.e_j_eff, omega_floor)?;
    let (s_at_w, w_floored) = if level.omega_eo_prime > 0.0 {
        (
            sqp_unfloored(level.omega_eo_prime, p.temperature, p.gap, geo.e_j_eff)?,
            false,
        )
    } else {
        (s_at_0, true)
    };
    let floored = level.weight_zero() > 0.0 || (w_floored && level.weight_split() > 0.0);
    Ok(Bracket {
        s_at_0,
        s_at_w,
        floored,
    })
}

fn rate_for_level(p: &QubitParams, omega_floor: f64, excited: bool) -> Result<RateBreakdown> {
    let (geo, ground, upper) = level_solutions(p, SpectrumOptions::default())?;
    let level = if excited { upper } else { ground };
    let prefactor = flux_prefactor(p, &geo);
    let bracket = spectral_bracket(p, &geo, &level, omega_floor)?;
    let weight_0 = level.weight_zero();
    let weight_w = level.weight_split();
    Ok(RateBreakdown {
        prefactor,
        weight_0,
        weight_w,
        s_at_0: bracket.s_at_0,
        s_at_w: bracket.s_at_w,
        gamma: prefactor * (weight_0 * bracket.s_at_0 + weight_w * bracket.s_at_w),
        omega_eo: level.omega_eo,
        omega_m: level.omega_m,
        omega_eo_prime: level.omega_eo_prime,
        floored: bracket.floored,
    })
}

/// Γ₀₀ᵒᵉ, closed form.
pub fn parity_switch_rate_ground(p: &QubitParams, omega_floor: f64) -> Result<RateBreakdown> {
    rate_for_level(p, omega_floor, false)
}

/// Γ₁₁ᵒᵉ: as the ground rate with ω_eo replaced by ω_eo⁽¹⁾.
pub fn parity_switch_rate_excited(p: &QubitParams, omega_floor: f64) -> Result<RateBreakdown> {
    rate_for_level(p, omega_floor, true)
}

/// Γ₀₀ᵒᵉ from explicit ⟨ψ₀|sin(φ̂_j/2)|ψ₀⟩ elements, weighted by E_Jj/E_J(f).
pub fn parity_switch_rate_matrix_form(p: &QubitParams, omega_floor: f64) -> Result<f64> {
    let (geo, ground, _) = level_solutions(p, SpectrumOptions::default())?;
    let flux_phase = PI * p.flux;
    let mut junction_sum = 0.0;
    for (e_j, phase) in [
        (p.e_j0, flux_phase - geo.theta),
        (p.e_j1, flux_phase + geo.theta),
    ] {
        let element = sin_half_matrix_element(0, 0, phase, p.e_c, geo.omega_p)?;
        junction_sum += e_j / geo.e_j_eff * element * element;
    }
    let b = spectral_bracket(p, &geo, &ground, omega_floor)?;
    Ok(junction_sum * (ground.weight_zero() * b.s_at_0 + ground.weight_split() * b.s_at_w))
}

/// Converts a rate in GHz to s⁻¹, optionally including the 2π of an
/// angular frequency.
pub fn rate_per_second(gamma_ghz: f64, two_pi: bool) -> f64 {
    let hz = gamma_ghz * 1e9;
    if two_pi {
        2.0 * PI * hz
    } else {
        hz
    }
}
