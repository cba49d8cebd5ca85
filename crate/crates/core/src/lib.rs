//! Collective response of 1D chains of resonant dipoles dressed by retarded
//! lattice sums: extinction and dispersion, radiated field maps,
//! optomechanical sidebands, saturable multi-level emitters and perturbative
//! pump-probe spectra.

pub mod error;
pub mod exciton;
pub mod field_map;
pub mod greens;
pub mod lattice_sums;
pub mod linear_response;
pub mod numerics;
pub mod optomechanics;
pub mod pump_probe;
pub mod spectrum;

pub use error::{Error, Result};
pub use numerics::{UnitVector3, C64, HBAR, HBAR_C};
