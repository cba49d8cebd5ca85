//! Units, constants, and small fixed-size linear algebra.
//!
//! Energies and frequencies are in eV (ħ = 1), lengths in nm, times in fs.
//! Every `c` in a formula becomes `HBAR_C`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// ħc in eV·nm.
pub const HBAR_C: f64 = 197.3269804;
/// ħ in eV·fs.
pub const HBAR: f64 = 0.6582119569;

pub const ZERO: C64 = C64::new(0.0, 0.0);

pub type Vec3 = [f64; 3];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(s: f64, a: Vec3) -> Vec3 {
    [s * a[0], s * a[1], s * a[2]]
}

/// Direction vector normalized at construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "[f64; 3]")]
pub struct UnitVector3([f64; 3]);

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3([1.0, 0.0, 0.0]);
    pub const Y: UnitVector3 = UnitVector3([0.0, 1.0, 0.0]);
    pub const Z: UnitVector3 = UnitVector3([0.0, 0.0, 1.0]);

    pub fn new(v: Vec3) -> Result<Self> {
        let n = norm(v);
        if !n.is_finite() || n == 0.0 {
            return Err(Error::invalid("orientation", "direction must be finite and nonzero"));
        }
        Ok(UnitVector3(scale(1.0 / n, v)))
    }

    pub fn as_array(&self) -> Vec3 {
        self.0
    }
}

impl From<UnitVector3> for [f64; 3] {
    fn from(u: UnitVector3) -> Self {
        u.0
    }
}

impl<'de> Deserialize<'de> for UnitVector3 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = <[f64; 3]>::deserialize(d)?;
        UnitVector3::new(v).map_err(serde::de::Error::custom)
    }
}

/// 3×3 complex tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexDyadic(pub [[C64; 3]; 3]);

impl ComplexDyadic {
    pub fn zero() -> Self {
        ComplexDyadic([[ZERO; 3]; 3])
    }

    pub fn identity() -> Self {
        Self::diagonal([C64::new(1.0, 0.0); 3])
    }

    pub fn diagonal(d: [C64; 3]) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = d[i];
        }
        m
    }

    /// Outer product u vᵀ.
    pub fn outer(u: Vec3, v: Vec3) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = C64::new(u[i] * v[j], 0.0);
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    pub fn scaled(&self, s: C64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|x| *x *= s);
        m
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] += other.0[i][j];
            }
        }
        m
    }

    /// Tensor applied to a complex vector.
    pub fn apply(&self, v: [C64; 3]) -> [C64; 3] {
        let mut out = [ZERO; 3];
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// uᵀ D v.
pub fn sandwich(u: UnitVector3, d: &ComplexDyadic, v: UnitVector3) -> C64 {
    let (u, v) = (u.0, v.0);
    let mut s = ZERO;
    for i in 0..3 {
        for j in 0..3 {
            s += d.0[i][j] * (u[i] * v[j]);
        }
    }
    s
}

/// Vacuum wavenumber ω/ħc in nm⁻¹.
pub fn wavenumber(omega: f64) -> Result<f64> {
    check_frequency(omega)?;
    Ok(omega / HBAR_C)
}

/// Vacuum wavelength in nm.
pub fn wavelength(omega: f64) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI / wavenumber(omega)?)
}

/// Photon energy in eV for a vacuum wavelength in nm.
pub fn energy_from_wavelength(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI * HBAR_C / lambda
}

pub(crate) fn check_frequency(omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveFrequency(omega))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_matches_500nm_line() {
        let k = wavenumber(2.4797).unwrap();
        assert!((k - 2.0 * std::f64::consts::PI / 500.0).abs() < 1e-6);
        assert!((wavenumber(HBAR_C).unwrap() - 1.0).abs() < 1e-15);
        assert!((wavelength(1.5).unwrap() - 826.56).abs() < 0.01);
    }

    #[test]
    fn rejects_non_positive_frequency() {
        assert!(wavenumber(0.0).is_err());
        assert!(wavenumber(-1.0).is_err());
        assert!(wavenumber(f64::NAN).is_err());
    }

    #[test]
    fn sandwich_trivial_cases() {
        let id = ComplexDyadic::identity();
        assert_eq!(sandwich(UnitVector3::Y, &id, UnitVector3::Y), C64::new(1.0, 0.0));
        let d = ComplexDyadic::diagonal([C64::new(2.0, 1.0), C64::new(3.0, 0.0), C64::new(0.5, 0.0)]);
        assert_eq!(sandwich(UnitVector3::X, &d, UnitVector3::Y), ZERO);
    }

    #[test]
    fn unit_vector_is_normalized() {
        let u = UnitVector3::new([3.0, 4.0, 12.0]).unwrap();
        assert!((norm(u.as_array()) - 1.0).abs() < 1e-15);
        assert!(UnitVector3::new([0.0; 3]).is_err());
    }
}
