//! Spectra and quasiparticle parity-switching rates of a transmon whose
//! junctions host Majorana bound states, with exact-diagonalization oracles.
//!
//! Energies are in GHz (E/h) throughout.

pub mod cli;
pub mod error;
pub mod exact;
pub mod qubit_model;
pub mod rates;
pub mod specfun;
pub mod sweep;
pub mod units;

pub use error::{Error, Result};
pub use qubit_model::{excitation_spectrum, QubitParams, SpectrumBranches, SpectrumOptions};
pub use rates::{parity_switch_rate_excited, parity_switch_rate_ground, RateBreakdown};
pub use sweep::{run_sweep, SweepResult, SweepSpec};
