//! Lattice-dressed polarizability and extinction of the bare particle chain.
//!
//! With incident polarization along the dipole orientation the response is a
//! scalar:
//!
//!   σ(ω) = 3πΓ₀ (ħc)² (ω/ω₀³) Im[1/D],   D = (ω₀ − ω) − iΓ₀/2 − S_q(ω)
//!
//! For S = 0 and ω = ω₀ this is the resonant cross-section 3λ₀²/(2π).

use rayon::prelude::*;

use crate::error::Result;
use crate::lattice_sums::{lattice_sum_self, LatticeSpec, ParticleSpec};
use crate::numerics::{check_frequency, C64, HBAR_C};
use crate::spectrum::{check_omegas, Axis, SpectrumGrid, SpectrumResult};

use std::f64::consts::PI;

pub fn polarizability_denominator(particle: &ParticleSpec, s: C64, omega: f64) -> C64 {
    C64::new(particle.omega0 - omega, -particle.gamma0_rad / 2.0) - s
}

/// 3πΓ₀(ħc)²ω/ω₀³ in nm²·eV.
pub(crate) fn extinction_prefactor(omega0: f64, gamma0: f64, omega: f64) -> f64 {
    3.0 * PI * gamma0 * HBAR_C * HBAR_C * omega / omega0.powi(3)
}

pub fn extinction_point(particle: &ParticleSpec, s: C64, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let d = polarizability_denominator(particle, s, omega);
    Ok(extinction_prefactor(particle.omega0, particle.gamma0_rad, omega) * d.inv().im)
}

/// Extinction at the lattice-dressed denominator for one (q, ω).
pub fn lattice_extinction(lattice: &LatticeSpec, particle: &ParticleSpec, q: f64, omega: f64) -> Result<f64> {
    let s = lattice_sum_self(lattice, particle, q, omega)?;
    extinction_point(particle, s, omega)
}

pub fn extinction_spectrum(
    lattice: &LatticeSpec,
    particle: &ParticleSpec,
    k_parallel: f64,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    check_omegas(omegas)?;
    let values: Vec<f64> = omegas
        .par_iter()
        .map(|&w| lattice_extinction(lattice, particle, k_parallel, w))
        .collect::<Result<_>>()?;
    Ok(SpectrumResult::from_dense("extinction", "nm^2", vec![Axis::new("omega", "eV", omegas.to_vec())], values))
}

/// Extinction over every (k∥, ω) pair, k∥ rows and ω columns.
pub fn dispersion_map(lattice: &LatticeSpec, particle: &ParticleSpec, grid: &SpectrumGrid) -> Result<SpectrumResult> {
    grid.validate()?;
    let nw = grid.omegas.len();
    let values: Vec<f64> = (0..grid.k_parallels.len() * nw)
        .into_par_iter()
        .map(|i| lattice_extinction(lattice, particle, grid.k_parallels[i / nw], grid.omegas[i % nw]))
        .collect::<Result<_>>()?;
    Ok(SpectrumResult::from_dense(
        "extinction",
        "nm^2",
        vec![
            Axis::new("k_parallel", "1/nm", grid.k_parallels.clone()),
            Axis::new("omega", "eV", grid.omegas.clone()),
        ],
        values,
    ))
}

/// Grating wavelengths λ± = (a/m)(1 ± sin θ) in nm.
pub fn rayleigh_anomaly(spacing: f64, theta_inc: f64, order: u32) -> (f64, f64) {
    let base = spacing / order as f64;
    (base * (1.0 + theta_inc.sin()), base * (1.0 - theta_inc.sin()))
}

/// First-order anomaly energies ħc|k∥ ± 2π/a| for in-plane momentum k∥.
pub fn anomaly_branches(spacing: f64, k_parallel: f64) -> (f64, f64) {
    let g = 2.0 * PI / spacing;
    let a = HBAR_C * (k_parallel - g).abs();
    let b = HBAR_C * (k_parallel + g).abs();
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{energy_from_wavelength, UnitVector3};

    fn bare() -> ParticleSpec {
        ParticleSpec { omega0: energy_from_wavelength(500.0), gamma0_rad: 0.5, orientation: UnitVector3::Y }
    }

    #[test]
    fn denominator_examples() {
        let p = bare();
        assert_eq!(polarizability_denominator(&p, C64::new(0.0, 0.0), p.omega0), C64::new(0.0, -0.25));
        let d = polarizability_denominator(&p, C64::new(0.0, 0.0), p.omega0 - 0.25);
        assert!((d - C64::new(0.25, -0.25)).norm() < 1e-15);
    }

    #[test]
    fn bare_peak_is_resonant_cross_section() {
        let p = bare();
        let v = extinction_point(&p, C64::new(0.0, 0.0), p.omega0).unwrap();
        assert!((v - 3.0 * 500.0f64.powi(2) / (2.0 * PI)).abs() / v < 1e-12);
        assert!((v - 1.19366e5).abs() < 1.0);
    }

    #[test]
    fn anomaly_wavelengths() {
        assert_eq!(rayleigh_anomaly(550.0, 0.0, 1), (550.0, 550.0));
        let (p, m) = rayleigh_anomaly(550.0, PI / 6.0, 1);
        assert!((p - 825.0).abs() < 1e-9 && (m - 275.0).abs() < 1e-9);
        assert_eq!(rayleigh_anomaly(550.0, 0.3, 2).0, rayleigh_anomaly(550.0, 0.3, 1).0 / 2.0);
        assert!((energy_from_wavelength(550.0) - 2.2542).abs() < 1e-4);
    }
}
