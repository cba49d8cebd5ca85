//! Free-space dyadic Green's tensor
//!
//! G(r,ω) = e^{ikr}/(4πk²) [ (k²/r + ik/r² − 1/r³) 𝟙 + (−k²/r − 3ik/r² + 3/r³) r̂r̂ ],  k = ω/ħc.
//!
//! The r → 0 divergence is never evaluated. Only the imaginary part of the
//! self term survives, Im G(0) = k/(6π) 𝟙; the real part is set to zero.

use crate::error::{Error, Result};
use crate::numerics::{check_frequency, dot, norm, wavenumber, ComplexDyadic, UnitVector3, Vec3, C64, HBAR_C};

use std::f64::consts::PI;

/// Isotropic and r̂r̂ coefficients of G, sharing the e^{ikr}/(4πk²) factor.
#[inline]
fn coefficients(r: f64, k: f64) -> (C64, C64) {
    let inv_r = 1.0 / r;
    let inv_r2 = inv_r * inv_r;
    let inv_r3 = inv_r2 * inv_r;
    let (s, c) = (k * r).sin_cos();
    let pre = C64::new(c, s) / (4.0 * PI * k * k);
    let iso = C64::new(k * k * inv_r - inv_r3, k * inv_r2);
    let rr = C64::new(-k * k * inv_r + 3.0 * inv_r3, -3.0 * k * inv_r2);
    (pre * iso, pre * rr)
}

pub fn greens_free_space(r: Vec3, omega: f64) -> Result<ComplexDyadic> {
    let k = wavenumber(omega)?;
    let d = norm(r);
    if d == 0.0 {
        return Err(Error::ZeroDisplacement);
    }
    let (iso, rr) = coefficients(d, k);
    let mut g = ComplexDyadic::zero();
    for i in 0..3 {
        for j in 0..3 {
            let mut v = rr * (r[i] * r[j] / (d * d));
            if i == j {
                v += iso;
            }
            g.0[i][j] = v;
        }
    }
    Ok(g)
}

/// uᵀ G(r) v for a nonzero displacement and k > 0; no validation.
#[inline]
pub(crate) fn projected(r: Vec3, k: f64, u: Vec3, v: Vec3) -> C64 {
    let d = norm(r);
    let (iso, rr) = coefficients(d, k);
    iso * dot(u, v) + rr * (dot(u, r) * dot(v, r) / (d * d))
}

/// G(r)·v for a nonzero displacement and k > 0; no validation.
#[inline]
pub(crate) fn applied(r: Vec3, k: f64, v: Vec3) -> [C64; 3] {
    let d = norm(r);
    let (iso, rr) = coefficients(d, k);
    let proj = dot(v, r) / (d * d);
    [iso * v[0] + rr * (r[0] * proj), iso * v[1] + rr * (r[1] * proj), iso * v[2] + rr * (r[2] * proj)]
}

/// ε·Im G(0,ω)·ε = ω/(6πħc). Independent of ε.
pub fn self_term_im(omega: f64, _eps: UnitVector3) -> Result<f64> {
    check_frequency(omega)?;
    Ok(omega / (6.0 * PI * HBAR_C))
}
