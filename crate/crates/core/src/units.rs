//! Unit conversions at the input boundary.
//!
//! Every energy inside the crate is a frequency E/h in GHz. Only the gap and
//! the temperature are commonly quoted in other units (μeV and mK), so those
//! are the only conversions provided.

use crate::error::{domain, Result};

/// GHz per μeV (e/h, CODATA).
pub const GHZ_PER_MICROELECTRONVOLT: f64 = 0.241_798_924_2;

/// GHz per kelvin (k_B/h, CODATA).
pub const GHZ_PER_KELVIN: f64 = 20.836_619_12;

/// A frequency-equivalent energy in GHz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Energy(f64);

impl Energy {
    pub fn from_ghz(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(domain(format!("energy must be finite, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn ghz(self) -> f64 {
        self.0
    }

    pub fn to_microelectronvolt(self) -> f64 {
        self.0 / GHZ_PER_MICROELECTRONVOLT
    }

    pub fn to_millikelvin(self) -> f64 {
        self.0 * 1000.0 / GHZ_PER_KELVIN
    }
}

pub fn energy_from_microelectronvolt(x: f64) -> Result<Energy> {
    if !(x >= 0.0) {
        return Err(domain(format!("energy in μeV must be >= 0, got {x}")));
    }
    Energy::from_ghz(x * GHZ_PER_MICROELECTRONVOLT)
}

pub fn temperature_from_millikelvin(x: f64) -> Result<Energy> {
    if !(x > 0.0) {
        return Err(domain(format!("temperature in mK must be > 0, got {x}")));
    }
    Energy::from_ghz(x * GHZ_PER_KELVIN / 1000.0)
}
