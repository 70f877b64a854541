use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("plasma frequency vanishes (E_J(f) = 0 at f = {f})")]
    VanishingPlasmaFrequency { f: f64 },

    #[error("E_J/E_C = {ratio} is outside the transmon regime (need >= {min})")]
    NotTransmon { ratio: f64, min: f64 },

    #[error("level {level} out of range (max {max})")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("charge cutoff {cutoff} too small (need >= {required})")]
    CutoffTooSmall { cutoff: usize, required: usize },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
