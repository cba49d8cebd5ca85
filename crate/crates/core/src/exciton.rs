//! Multi-level emitters with static populations.
//!
//! A transition ν → ν′ with inversion p = P(ν′) − P(ν) ≤ 0 responds as
//!
//!   R(ω) = −i·p / [ i·S·p − i(ω − ω_t) + Γ_t/2 ]
//!
//! which for p = −1 is exactly 1/((ω_t − ω) − S − iΓ_t/2). Its extinction is
//! 3πΓ_t(ħc)²(ω/ω_t³)·Im R, and the total is the sum over allowed transitions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice_sums::{lattice_sum_self, LatticeSpec, ParticleSpec};
use crate::linear_response::extinction_prefactor;
use crate::numerics::{check_frequency, UnitVector3, C64, ZERO};
use crate::spectrum::{check_omegas, Axis, SpectrumResult};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    /// Lower level label (1-based).
    pub lower: usize,
    /// Upper level label (1-based).
    pub upper: usize,
    pub omega_t: f64,
    pub gamma_t_rad: f64,
    #[serde(default = "default_orientation")]
    pub orientation: UnitVector3,
    #[serde(default = "default_allowed")]
    pub dipole_allowed: bool,
}

fn default_orientation() -> UnitVector3 {
    UnitVector3::Y
}

fn default_allowed() -> bool {
    true
}

impl TransitionSpec {
    pub fn validate(&self) -> Result<()> {
        let name = format!("transition {}->{}", self.lower, self.upper);
        if self.lower == 0 || self.upper <= self.lower {
            return Err(Error::invalid(name, "levels are 1-based with upper > lower"));
        }
        if !(self.omega_t > 0.0 && self.omega_t.is_finite()) {
            return Err(Error::invalid(name, "omega_t must be > 0"));
        }
        if !(self.gamma_t_rad >= 0.0 && self.gamma_t_rad.is_finite()) {
            return Err(Error::invalid(name, "gamma_t_rad must be >= 0"));
        }
        if (self.gamma_t_rad > 0.0) != self.dipole_allowed {
            return Err(Error::invalid(name, "gamma_t_rad must be zero exactly when the transition is dipole-forbidden"));
        }
        Ok(())
    }

    /// The transition seen as a single resonant dipole, for lattice sums.
    pub fn as_particle(&self) -> ParticleSpec {
        ParticleSpec { omega0: self.omega_t, gamma0_rad: self.gamma_t_rad, orientation: self.orientation }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationState {
    /// Occupation of levels 1, 2, … in order.
    pub populations: Vec<f64>,
}

impl PopulationState {
    pub fn new(populations: Vec<f64>) -> Result<Self> {
        let p = PopulationState { populations };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.populations.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::invalid("populations", "each must lie in [0, 1]"));
        }
        let total: f64 = self.populations.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("populations", format!("must sum to 1, got {total}")));
        }
        Ok(())
    }

    fn level(&self, l: usize) -> Result<f64> {
        self.populations
            .get(l.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Error::invalid("populations", format!("no level {l}")))
    }

    /// P(upper) − P(lower).
    pub fn inversion(&self, t: &TransitionSpec) -> Result<f64> {
        Ok(self.level(t.upper)? - self.level(t.lower)?)
    }
}

/// i·S·p − i(ω − ω_t) + Γ_t/2.
pub fn transition_polarizability_denominator(t: &TransitionSpec, p_inv: f64, s: C64, omega: f64) -> C64 {
    C64::i() * s * p_inv + C64::new(t.gamma_t_rad / 2.0, -(omega - t.omega_t))
}

pub fn transition_response(t: &TransitionSpec, p_inv: f64, s: C64, omega: f64) -> Result<C64> {
    if p_inv > 0.0 {
        return Err(Error::InversionRegime(p_inv));
    }
    if p_inv == 0.0 || !t.dipole_allowed {
        return Ok(ZERO);
    }
    Ok(C64::new(0.0, -p_inv) / transition_polarizability_denominator(t, p_inv, s, omega))
}

pub fn transition_extinction(t: &TransitionSpec, p_inv: f64, s: C64, omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    let r = transition_response(t, p_inv, s, omega)?;
    if r == ZERO {
        return Ok(0.0);
    }
    Ok(extinction_prefactor(t.omega_t, t.gamma_t_rad, omega) * r.im)
}

/// Warnings for allowed transitions closer than 5·max Γ_t.
pub fn crowding_warnings(transitions: &[TransitionSpec]) -> Vec<String> {
    let allowed: Vec<&TransitionSpec> = transitions.iter().filter(|t| t.dipole_allowed).collect();
    let gmax = allowed.iter().map(|t| t.gamma_t_rad).fold(0.0, f64::max);
    let mut out = Vec::new();
    for (i, a) in allowed.iter().enumerate() {
        for b in &allowed[i + 1..] {
            if (a.omega_t - b.omega_t).abs() < 5.0 * gmax {
                out.push(format!(
                    "transitions {}->{} and {}->{} are within 5*gamma of each other; neglected cross-coupling may matter",
                    a.lower, a.upper, b.lower, b.upper
                ));
            }
        }
    }
    out
}

pub fn exciton_extinction_spectrum(
    lattice: &LatticeSpec,
    transitions: &[TransitionSpec],
    pop: &PopulationState,
    k_parallel: f64,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    check_omegas(omegas)?;
    pop.validate()?;
    let mut active = Vec::new();
    for t in transitions {
        t.validate()?;
        let p = pop.inversion(t)?;
        if p > 0.0 {
            return Err(Error::InversionRegime(p));
        }
        if t.dipole_allowed && p != 0.0 {
            active.push((*t, p));
        }
    }
    let values: Vec<f64> = omegas
        .par_iter()
        .map(|&w| {
            let mut total = 0.0;
            for (t, p) in &active {
                let s = lattice_sum_self(lattice, &t.as_particle(), k_parallel, w)?;
                total += transition_extinction(t, *p, s, w)?;
            }
            Ok(total)
        })
        .collect::<Result<_>>()?;
    let mut out = SpectrumResult::from_dense("extinction", "nm^2", vec![Axis::new("omega", "eV", omegas.to_vec())], values);
    out.warnings = crowding_warnings(transitions);
    Ok(out)
}
