//! Total field of a plane-wave driven chain.
//!
//! Each site carries p_n = α̃ e^{ik∥x_n} along ε_μ with α̃ = 3π(ħc)³Γ₀/ω₀³ / D(ω)
//! (nm³). The field at r is
//!
//!   E(r) = ε_μ e^{ik_in·r} + k² Σ_n G(r − r_n)·ε_μ p_n
//!
//! with k_in in the plane spanned by the chain axis and ẑ.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greens::applied;
use crate::lattice_sums::{lattice_sum_self, LatticeSpec, ParticleSpec};
use crate::linear_response::polarizability_denominator;
use crate::numerics::{add, dot, norm, scale, sub, wavenumber, Vec3, C64, HBAR_C, ZERO};
use crate::spectrum::{Axis, SpectrumResult};

use std::f64::consts::PI;

/// Points closer than this to a particle are treated as coincident.
const COINCIDENT: f64 = 1e-9;

/// Sample plane y = 0, cell-centred samples over the x and z ranges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGrid {
    pub x_range: [f64; 2],
    pub z_range: [f64; 2],
    pub nx: usize,
    pub nz: usize,
    /// Samples within this distance of a particle are masked (nm).
    #[serde(default = "default_mask")]
    pub mask_radius: f64,
}

fn default_mask() -> f64 {
    10.0
}

impl FieldGrid {
    pub fn validate(&self) -> Result<()> {
        let ok = |r: [f64; 2]| r[0].is_finite() && r[1].is_finite() && r[1] > r[0];
        if !ok(self.x_range) || !ok(self.z_range) {
            return Err(Error::invalid("field grid", "ranges must be finite with max > min"));
        }
        if self.nx == 0 || self.nz == 0 {
            return Err(Error::invalid("field grid", "nx and nz must be positive"));
        }
        if !(self.mask_radius >= COINCIDENT) {
            return Err(Error::invalid("field grid", "mask_radius must be >= 1e-9 nm"));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        centres(self.x_range, self.nx)
    }

    pub fn zs(&self) -> Vec<f64> {
        centres(self.z_range, self.nz)
    }
}

fn centres(r: [f64; 2], n: usize) -> Vec<f64> {
    let d = (r[1] - r[0]) / n as f64;
    (0..n).map(|i| r[0] + (i as f64 + 0.5) * d).collect()
}

/// 3π(ħc)³Γ₀/ω₀³ / D in nm³.
pub fn reduced_polarizability(particle: &ParticleSpec, s: C64, omega: f64) -> C64 {
    let strength = 3.0 * PI * HBAR_C.powi(3) * particle.gamma0_rad / particle.omega0.powi(3);
    strength / polarizability_denominator(particle, s, omega)
}

/// Dipole amplitude of every site, ordered n = −M/2..=M/2.
pub fn driven_dipole_moment(lattice: &LatticeSpec, particle: &ParticleSpec, k_parallel: f64, omega: f64) -> Result<Vec<C64>> {
    let s = lattice_sum_self(lattice, particle, k_parallel, omega)?;
    let alpha = reduced_polarizability(particle, s, omega);
    Ok(lattice
        .indices()
        .map(|n| alpha * C64::from_polar(1.0, k_parallel * n as f64 * lattice.spacing))
        .collect())
}

/// A chain with its dipoles solved at one (k∥, ω); evaluates fields cheaply.
pub struct DrivenChain {
    lattice: LatticeSpec,
    orientation: Vec3,
    k: f64,
    k_in: Vec3,
    dipoles: Vec<C64>,
    amplitude: f64,
}

impl DrivenChain {
    pub fn new(lattice: &LatticeSpec, particle: &ParticleSpec, k_parallel: f64, omega: f64) -> Result<Self> {
        let k = wavenumber(omega)?;
        if k_parallel.abs() > k {
            return Err(Error::invalid("k_parallel", "exceeds the free-space wavenumber"));
        }
        let axis = lattice.axis.as_array();
        let kz = (k * k - k_parallel * k_parallel).sqrt();
        let k_in = add(scale(k_parallel, axis), [0.0, 0.0, kz]);
        Ok(DrivenChain {
            lattice: *lattice,
            orientation: particle.orientation.as_array(),
            k,
            k_in,
            dipoles: driven_dipole_moment(lattice, particle, k_parallel, omega)?,
            amplitude: 1.0,
        })
    }

    /// Scales the incident amplitude (and with it every dipole).
    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn dipoles(&self) -> &[C64] {
        &self.dipoles
    }

    /// Distance from r to the nearest particle.
    pub fn nearest_particle(&self, r: Vec3) -> f64 {
        let axis = self.lattice.axis.as_array();
        let h = self.lattice.half() as f64;
        let n = (dot(r, axis) / self.lattice.spacing).round().clamp(-h, h);
        norm(sub(r, scale(n * self.lattice.spacing, axis)))
    }

    pub fn field(&self, r: Vec3) -> Result<[C64; 3]> {
        if self.nearest_particle(r) < COINCIDENT {
            return Err(Error::invalid("evaluation point", "coincides with a particle"));
        }
        Ok(self.field_unchecked(r))
    }

    fn field_unchecked(&self, r: Vec3) -> [C64; 3] {
        let e = self.orientation;
        let mut sca = [ZERO; 3];
        for (n, p) in self.lattice.indices().zip(&self.dipoles) {
            let g = applied(sub(r, self.lattice.site(n)), self.k, e);
            for c in 0..3 {
                sca[c] += g[c] * p;
            }
        }
        let inc = C64::from_polar(1.0, dot(self.k_in, r));
        let k2 = self.k * self.k;
        let mut out = [ZERO; 3];
        for c in 0..3 {
            out[c] = (inc * e[c] + sca[c] * k2) * self.amplitude;
        }
        out
    }

    pub fn intensity(&self, r: Vec3) -> Result<f64> {
        Ok(self.field(r)?.iter().map(|z| z.norm_sqr()).sum())
    }

    /// |E|² on the grid, z rows and x columns; masked samples are `None`.
    pub fn intensity_map(&self, grid: &FieldGrid) -> Result<SpectrumResult> {
        grid.validate()?;
        let xs = grid.xs();
        let zs = grid.zs();
        let values: Vec<Option<f64>> = (0..xs.len() * zs.len())
            .into_par_iter()
            .map(|i| {
                let r = [xs[i % xs.len()], 0.0, zs[i / xs.len()]];
                if self.nearest_particle(r) < grid.mask_radius {
                    None
                } else {
                    Some(self.field_unchecked(r).iter().map(|z| z.norm_sqr()).sum())
                }
            })
            .collect();
        Ok(SpectrumResult::new(
            "intensity",
            "|E0|^2",
            vec![Axis::new("z", "nm", zs), Axis::new("x", "nm", xs)],
            values,
        ))
    }
}

pub fn total_field(r: Vec3, lattice: &LatticeSpec, particle: &ParticleSpec, k_parallel: f64, omega: f64) -> Result<[C64; 3]> {
    DrivenChain::new(lattice, particle, k_parallel, omega)?.field(r)
}

pub fn intensity_map(
    grid: &FieldGrid,
    lattice: &LatticeSpec,
    particle: &ParticleSpec,
    k_parallel: f64,
    omega: f64,
) -> Result<SpectrumResult> {
    DrivenChain::new(lattice, particle, k_parallel, omega)?.intensity_map(grid)
}
