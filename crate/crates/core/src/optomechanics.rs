//! Optomechanical dressing of the chain by Raman-active molecules.
//!
//! A laser at ω_ℓ induces Raman dipoles p at offset r_m from every particle.
//! The anti-Stokes (red-detuned drive, sign s = +1) or Stokes (blue, s = −1)
//! sideband at ω_s = ω_ℓ + s·ω_vib adds the self-energy
//!
//!   Σ(ω) = s·i·S_om² / [ i(ω_s − ω) + (Γ_vib + s·γ_p)/2 − s·i·S_p ]
//!
//! to the particle denominator, with S_om the particle–molecule cross sum and
//! S_p the molecule–molecule sum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_sums::{lattice_sum_cross, lattice_sum_raman_self, lattice_sum_self, CrossLatticeSpec, LatticeSpec, ParticleSpec};
use crate::linear_response::extinction_point;
use crate::numerics::{UnitVector3, Vec3, C64};
use crate::spectrum::{check_omegas, Axis, SpectrumResult};

/// Denominators smaller than this (eV) are reported as singular.
pub const SINGULAR_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Anti-Stokes sideband ω_ℓ + ω_vib, cooling.
    Red,
    /// Stokes sideband ω_ℓ − ω_vib, heating.
    Blue,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Red => 1.0,
            Branch::Blue => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OMParams {
    pub omega_vib: f64,
    pub gamma_vib: f64,
    pub omega_laser: f64,
    pub branch: Branch,
    /// Raman dipole relative to the particle dipole, p/μ₀.
    pub raman_ratio: f64,
    pub offset: Vec3,
    pub raman_orientation: UnitVector3,
}

impl OMParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_vib > 0.0 && self.omega_vib.is_finite()) {
            return Err(Error::invalid("omega_vib", "must be > 0"));
        }
        if !(self.omega_laser > 0.0 && self.omega_laser.is_finite()) {
            return Err(Error::invalid("omega_laser", "must be > 0"));
        }
        if !(self.gamma_vib >= 0.0 && self.gamma_vib.is_finite()) {
            return Err(Error::invalid("gamma_vib", "must be >= 0"));
        }
        if self.sideband() <= 0.0 {
            return Err(Error::invalid("omega_laser", "sideband frequency must be positive"));
        }
        self.cross().validate()
    }

    /// ω_ℓ ± ω_vib.
    pub fn sideband(&self) -> f64 {
        self.omega_laser + self.branch.sign() * self.omega_vib
    }

    pub fn cross(&self) -> CrossLatticeSpec {
        CrossLatticeSpec {
            offset: self.offset,
            partner_orientation: self.raman_orientation,
            amplitude_ratio: self.raman_ratio,
        }
    }
}

/// Radiative width of the Raman dipole, Γ₀ (p/μ₀)² (ω_s/ω₀)³.
pub fn gamma_p(params: &OMParams, particle: &ParticleSpec) -> f64 {
    let r = params.raman_ratio;
    particle.gamma0_rad * r * r * (params.sideband() / particle.omega0).powi(3)
}

/// Γ_vib ± γ_p: full linewidth of the laser-dressed vibration.
pub fn molecular_linewidth(params: &OMParams, particle: &ParticleSpec) -> f64 {
    params.gamma_vib + params.branch.sign() * gamma_p(params, particle)
}

pub fn om_self_energy(s_om: C64, s_p: C64, params: &OMParams, particle: &ParticleSpec, omega: f64) -> Result<C64> {
    let s = params.branch.sign();
    let den = C64::new(molecular_linewidth(params, particle) / 2.0, params.sideband() - omega) - C64::i() * s_p * s;
    if den.norm() < SINGULAR_FLOOR {
        return Err(Error::Singular { omega, magnitude: den.norm() });
    }
    Ok(C64::i() * s * s_om * s_om / den)
}

/// Warning text when the blue-branch anti-Stokes line overlaps the particle resonance.
pub fn rwa_warning(params: &OMParams, particle: &ParticleSpec) -> Option<String> {
    let anti_stokes = params.omega_laser + params.omega_vib;
    if params.branch == Branch::Blue && (anti_stokes - particle.omega0).abs() < 2.0 * particle.gamma0_rad {
        Some(format!(
            "blue branch: anti-Stokes line at {anti_stokes} eV lies within 2*gamma0 of the particle resonance; rotating-wave result unreliable"
        ))
    } else {
        None
    }
}

pub fn om_extinction_spectrum(
    lattice: &LatticeSpec,
    particle: &ParticleSpec,
    om: &OMParams,
    k_parallel: f64,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    check_omegas(omegas)?;
    om.validate()?;
    let cross = om.cross();
    let values: Vec<Option<f64>> = omegas
        .par_iter()
        .map(|&w| {
            let s_mu = lattice_sum_self(lattice, particle, k_parallel, w)?;
            let s_om = lattice_sum_cross(lattice, particle, &cross, k_parallel, w)?;
            let s_p = lattice_sum_raman_self(lattice, &cross, particle, k_parallel, w)?;
            match om_self_energy(s_om, s_p, om, particle, w) {
                Ok(sigma) => extinction_point(particle, s_mu + sigma, w).map(Some),
                Err(Error::Singular { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut out = SpectrumResult::new("extinction", "nm^2", vec![Axis::new("omega", "eV", omegas.to_vec())], values);
    if out.values.iter().any(Option::is_none) {
        out.warnings.push("singular self-energy denominator: affected samples masked".into());
    }
    out.warnings.extend(rwa_warning(om, particle));
    Ok(out)
}

/// Cavity and molecular spectra of the single-mode model, each divided by its
/// counterpart without optomechanical interaction (g = 0, γ_p = 0).
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeSpectra {
    pub cavity: Vec<f64>,
    pub molecular: Vec<f64>,
}

/// One plasmon mode (ω₀, Γ₀) coupled with strength g to one vibration sideband.
///
/// cavity:    Im 1/[(ω₀ − ω) − iΓ₀/2 − s·i·g²/(i(ω_s − ω) + w)]
/// molecular: Im 1/[(ω_s − ω) − i·w − s·i·g²/(Γ₀/2 + i(ω₀ − ω))]
///
/// with w = (Γ_vib + s·γ_p)/2. The molecular line is the cavity expression with
/// the roles of plasmon and vibration exchanged; its effective half width is
/// w + s·g²·Re[1/(Γ₀/2 − i(ω₀ − ω))].
pub fn single_mode_om_spectrum(g: f64, particle: &ParticleSpec, om: &OMParams, omegas: &[f64]) -> Result<SingleModeSpectra> {
    check_omegas(omegas)?;
    om.validate()?;
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::invalid("g", "must be >= 0"));
    }
    let ws = om.sideband();
    if (ws - particle.omega0).abs() > 1e-9 * particle.omega0 {
        return Err(Error::invalid("omega_laser", "single-mode model needs omega_laser +/- omega_vib = omega0"));
    }
    let s = om.branch.sign();
    let w = molecular_linewidth(om, particle) / 2.0;
    let (w0, half) = (particle.omega0, particle.gamma0_rad / 2.0);
    let mut cavity = Vec::with_capacity(omegas.len());
    let mut molecular = Vec::with_capacity(omegas.len());
    for &x in omegas {
        let i = C64::i();
        let sigma_c = i * s * g * g / C64::new(w, ws - x);
        let cav = (C64::new(w0 - x, -half) - sigma_c).inv().im;
        let cav_bare = C64::new(w0 - x, -half).inv().im;
        let sigma_m = i * s * g * g / C64::new(half, w0 - x);
        let mol = (C64::new(ws - x, -w) - sigma_m).inv().im;
        let mol_bare = C64::new(ws - x, -om.gamma_vib / 2.0).inv().im;
        cavity.push(cav / cav_bare);
        molecular.push(mol / mol_bare);
    }
    Ok(SingleModeSpectra { cavity, molecular })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig4(branch: Branch, gamma_vib: f64, ratio: f64) -> (ParticleSpec, OMParams) {
        let p = ParticleSpec { omega0: 1.0, gamma0_rad: 0.1, orientation: UnitVector3::Y };
        let omega_vib = 0.2;
        let omega_laser = 1.0 - branch.sign() * omega_vib;
        let om = OMParams {
            omega_vib,
            gamma_vib,
            omega_laser,
            branch,
            raman_ratio: ratio,
            offset: [0.0; 3],
            raman_orientation: UnitVector3::Y,
        };
        (p, om)
    }

    #[test]
    fn gamma_p_examples() {
        let (p, om) = fig4(Branch::Red, 0.0, 0.3);
        assert!((gamma_p(&om, &p) - 0.09 * p.gamma0_rad).abs() < 1e-15);
        let (p, om) = fig4(Branch::Blue, 0.0, 0.0);
        assert_eq!(gamma_p(&om, &p), 0.0);
        let (p, om) = fig4(Branch::Red, 0.01, 0.1);
        assert!((gamma_p(&om, &p) - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn self_energy_on_sideband() {
        let (p, om) = fig4(Branch::Red, 0.01, 0.1);
        let s_om = C64::new(0.02, 0.005);
        let sig = om_self_energy(s_om, C64::new(0.0, 0.0), &om, &p, om.sideband()).unwrap();
        let expect = C64::i() * s_om * s_om / ((0.01 + 1e-3) / 2.0);
        assert!((sig - expect).norm() < 1e-15);
        assert_eq!(om_self_energy(C64::new(0.0, 0.0), C64::new(0.1, 0.0), &om, &p, 1.0).unwrap(), C64::new(0.0, 0.0));
        let damped = OMParams { gamma_vib: 1e9, ..om };
        assert!(om_self_energy(s_om, C64::new(0.0, 0.0), &damped, &p, 1.0).unwrap().norm() < 1e-12);
    }

    #[test]
    fn singular_denominator_reported() {
        let (p, om) = fig4(Branch::Red, 0.0, 0.0);
        let r = om_self_energy(C64::new(1.0, 0.0), C64::new(0.0, 0.0), &om, &p, om.sideband());
        assert!(matches!(r, Err(Error::Singular { .. })));
    }

    #[test]
    fn no_interaction_normalizes_to_one() {
        let (p, om) = fig4(Branch::Blue, 0.01, 0.0);
        let ws: Vec<f64> = (0..101).map(|i| 0.8 + 0.004 * i as f64).collect();
        let s = single_mode_om_spectrum(0.0, &p, &om, &ws).unwrap();
        assert!(s.cavity.iter().chain(&s.molecular).all(|&v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn stability_boundary_at_equal_widths() {
        let (p, om) = fig4(Branch::Blue, 0.01, 0.1);
        let ratio_at_boundary = (om.gamma_vib / p.gamma0_rad).sqrt();
        let below = OMParams { raman_ratio: ratio_at_boundary * 0.99, ..om };
        let above = OMParams { raman_ratio: ratio_at_boundary * 1.01, ..om };
        assert!(molecular_linewidth(&below, &p) > 0.0);
        assert!(molecular_linewidth(&above, &p) < 0.0);
    }
}
