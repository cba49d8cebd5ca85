//! Quasi-momentum lattice sums of a finite 1D chain.
//!
//! Sites sit at n·a·axis for n = −M/2..=M/2 around a central site. The self
//! sum is
//!
//!   S_q(ω) = 3πΓ₀ ħc (ω²/ω₀³) Σ_{n≠0} e^{−iqna} ε·G(n a axis, ω)·ε
//!
//! and the cross sum replaces ε on one side with a partner orientation,
//! shifts every displacement by r_m and keeps n = 0.
//!
//! Terms are accumulated as (n, −n) pairs from n = 1 outward, in fixed-size
//! chunks whose partial sums are added in chunk order, so the result is
//! bit-identical regardless of how many threads evaluate the chunks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::projected;
use crate::numerics::{add, dot, norm, scale, wavenumber, UnitVector3, Vec3, C64, HBAR_C, ZERO};

use std::f64::consts::PI;

/// Pairs per chunk; fixed so the reduction tree never depends on thread count.
const CHUNK: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSpec {
    /// Resonance energy ω₀ (eV).
    pub omega0: f64,
    /// Radiative linewidth Γ₀ (eV).
    pub gamma0_rad: f64,
    pub orientation: UnitVector3,
}

impl ParticleSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::invalid("particle.omega0", "must be > 0"));
        }
        if !(self.gamma0_rad > 0.0 && self.gamma0_rad.is_finite()) {
            return Err(Error::invalid("particle.gamma0_rad", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    /// Spacing a (nm).
    pub spacing: f64,
    /// Number of neighbours M around the central site (even).
    pub sites: usize,
    #[serde(default = "default_axis")]
    pub axis: UnitVector3,
}

fn default_axis() -> UnitVector3 {
    UnitVector3::X
}

impl LatticeSpec {
    pub fn new(spacing: f64, sites: usize) -> Result<Self> {
        let l = LatticeSpec { spacing, sites, axis: UnitVector3::X };
        l.validate()?;
        Ok(l)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::invalid("lattice.spacing", "must be > 0"));
        }
        if self.sites < 2 || self.sites % 2 != 0 {
            return Err(Error::invalid("lattice.sites", "must be an even integer >= 2"));
        }
        Ok(())
    }

    pub fn half(&self) -> i64 {
        (self.sites / 2) as i64
    }

    /// Position of site n.
    pub fn site(&self, n: i64) -> Vec3 {
        scale(n as f64 * self.spacing, self.axis.as_array())
    }

    /// Site indices −M/2..=M/2 in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let h = self.half();
        -h..=h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossLatticeSpec {
    /// Offset r_m of the partner sublattice (nm).
    pub offset: Vec3,
    pub partner_orientation: UnitVector3,
    /// Partner dipole relative to the particle dipole, e.g. p/μ₀.
    pub amplitude_ratio: f64,
}

impl CrossLatticeSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude_ratio >= 0.0 && self.amplitude_ratio.is_finite()) {
            return Err(Error::invalid("amplitude_ratio", "must be >= 0"));
        }
        if self.offset.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("offset", "must be finite"));
        }
        Ok(())
    }
}

/// 3πΓ₀ ratio ħc ω²/ω₀³.
pub fn dressing_prefactor(particle: &ParticleSpec, ratio: f64, omega: f64) -> f64 {
    3.0 * PI * particle.gamma0_rad * ratio * HBAR_C * omega * omega / particle.omega0.powi(3)
}

/// Sum of `term(n)` for n = 1..=count in fixed chunks, reduced in order.
fn ordered_sum(count: i64, term: impl Fn(i64) -> C64 + Sync) -> C64 {
    let chunks = (count as usize).div_ceil(CHUNK);
    let partials: Vec<C64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = (c * CHUNK) as i64 + 1;
            let hi = (((c + 1) * CHUNK) as i64).min(count);
            let mut acc = ZERO;
            for n in lo..=hi {
                acc += term(n);
            }
            acc
        })
        .collect();
    partials.into_iter().fold(ZERO, |a, b| a + b)
}

/// Σ_{n≠0} e^{−iqna} u·G(n a axis)·v, paired as (n, −n).
fn self_green_sum(lattice: &LatticeSpec, u: Vec3, v: Vec3, q: f64, k: f64) -> C64 {
    let axis = lattice.axis.as_array();
    ordered_sum(lattice.half(), |n| {
        let x = n as f64 * lattice.spacing;
        // G is even in r, so the pair contributes 2cos(qx)·G(x).
        projected(scale(x, axis), k, u, v) * (2.0 * (q * x).cos())
    })
}

pub fn lattice_sum_self(lattice: &LatticeSpec, particle: &ParticleSpec, q: f64, omega: f64) -> Result<C64> {
    let k = wavenumber(omega)?;
    let e = particle.orientation.as_array();
    let sum = self_green_sum(lattice, e, e, q, k);
    Ok(sum * dressing_prefactor(particle, 1.0, omega))
}

pub fn lattice_sum_cross(
    lattice: &LatticeSpec,
    particle: &ParticleSpec,
    cross: &CrossLatticeSpec,
    q: f64,
    omega: f64,
) -> Result<C64> {
    let k = wavenumber(omega)?;
    let axis = lattice.axis.as_array();
    let along = dot(cross.offset, axis);
    let perp = norm(add(cross.offset, scale(-along, axis)));
    if perp == 0.0 && (along / lattice.spacing).fract() == 0.0 && (along / lattice.spacing).abs() <= lattice.half() as f64 {
        return Err(Error::ZeroDisplacement);
    }
    let u = particle.orientation.as_array();
    let v = cross.partner_orientation.as_array();
    let term = |n: i64| {
        let r = add(lattice.site(n), cross.offset);
        let phase = C64::from_polar(1.0, -q * (n as f64 * lattice.spacing + along));
        phase * projected(r, k, u, v)
    };
    let sum = term(0) + ordered_sum(lattice.half(), |n| term(n) + term(-n));
    Ok(sum * dressing_prefactor(particle, cross.amplitude_ratio, omega))
}

/// Self sum of the partner sublattice: orientation ε_p, prefactor scaled by ratio².
pub fn lattice_sum_raman_self(
    lattice: &LatticeSpec,
    cross: &CrossLatticeSpec,
    reference: &ParticleSpec,
    q: f64,
    omega: f64,
) -> Result<C64> {
    let k = wavenumber(omega)?;
    let e = cross.partner_orientation.as_array();
    let sum = self_green_sum(lattice, e, e, q, k);
    let r = cross.amplitude_ratio;
    Ok(sum * dressing_prefactor(reference, r * r, omega))
}
