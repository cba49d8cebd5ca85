use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("frequency must be positive and finite, got {0} eV")]
    NonPositiveFrequency(f64),

    #[error("zero-length displacement hits the Green's tensor singularity")]
    ZeroDisplacement,

    #[error("population inversion {0} is outside the absorptive regime (needs p_inv <= 0)")]
    InversionRegime(f64),

    #[error("singular denominator at {omega} eV (|den| = {magnitude:e})")]
    Singular { omega: f64, magnitude: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    pub fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.into(), reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
