//! Perturbative pump-probe response of a three-level emitter chain.
//!
//! Frequencies are in eV and time in fs; Fourier transforms use
//! F(ω) = ∫ f(t) e^{iωt/ħ} dt, so every convolution carries a 1/(2πħ).
//! A pump on 1→2 creates the coherence
//!
//!   σ¹²(ω) = −p₀ ħ F_pump(ω) / [Γ₁₂/2 − i(ω − ω₁₂) + i p₀ S¹²(ω)]
//!
//! at q = k∥. The zero-momentum population of level 2 obeys
//!
//!   −iω/ħ P = −(Γ₁₂/ħ)[σ*∗σ] − 2·Im_t[σ*∗(S¹²σ/ħ)] + [σ*∗F] + [F*∗σ]
//!
//! where Im_t is the imaginary part of the underlying time-domain product. The
//! probe then drives 2→3 through P:
//!
//!   σ²³(ω) = ħ [F_probe ∗ P](ω) / [Γ₂₃/2 − i S²³(ω) − i(ω − ω₂₃)]
//!
//! P(ω) has a pole at zero frequency displaced by ε_reg. Convolutions with P
//! integrate that pole exactly over each grid cell (product integration)
//! instead of sampling it.

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exciton::TransitionSpec;
use crate::lattice_sums::{lattice_sum_self, LatticeSpec};
use crate::linear_response::extinction_prefactor;
use crate::numerics::{C64, HBAR, ZERO};
use crate::spectrum::{Axis, SpectrumResult};

use std::f64::consts::PI;

/// Default population-pole displacement in eV.
pub const EPS_REG: f64 = 1e-6;
/// Pulse spectra are reported only where |f| exceeds this fraction of its peak.
pub const SPECTRUM_FLOOR: f64 = 1e-3;

/// Gaussian pulse η·exp(−(t − delay)²/(2τ²))·e^{−iω_c t/ħ}; `fwhm` is the
/// full width of the field envelope.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    /// Carrier ω_c (eV).
    pub center: f64,
    /// Envelope FWHM (fs).
    pub fwhm: f64,
    pub amplitude: f64,
    /// Arrival time (fs).
    #[serde(default)]
    pub delay: f64,
}

impl PulseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.fwhm > 0.0 && self.fwhm.is_finite()) {
            return Err(Error::invalid("pulse.fwhm", "must be > 0"));
        }
        if !(self.center > 0.0 && self.center.is_finite()) {
            return Err(Error::invalid("pulse.center", "must be > 0"));
        }
        if !self.amplitude.is_finite() || !self.delay.is_finite() {
            return Err(Error::invalid("pulse", "amplitude and delay must be finite"));
        }
        Ok(())
    }

    /// Standard deviation τ of the envelope (fs).
    pub fn temporal_width(&self) -> f64 {
        self.fwhm / (2.0 * (2.0 * 2f64.ln()).sqrt())
    }

    /// Standard deviation of the spectrum, ħ/τ (eV).
    pub fn spectral_width(&self) -> f64 {
        HBAR / self.temporal_width()
    }

    /// η·τ√(2π)·exp(−τ²Ω²/2)·e^{iΩ·delay} with Ω = (ω − ω_c)/ħ.
    pub fn spectrum_at(&self, omega: f64) -> C64 {
        let tau = self.temporal_width();
        let x = (omega - self.center) / HBAR;
        let mag = self.amplitude * tau * (2.0 * PI).sqrt() * (-0.5 * tau * tau * x * x).exp();
        C64::from_polar(mag, x * self.delay)
    }
}

/// Uniform grid ω_k = k·Δ for k = first..first+len. Grids sharing Δ are
/// aligned, so differences of their points land on integer offsets.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub first: i64,
    pub len: usize,
    pub spacing: f64,
}

impl FrequencyGrid {
    /// Grid of step `spacing` covering center ± half_span, centred on the
    /// grid point nearest `center`.
    pub fn centered(center: f64, half_span: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && half_span > 0.0 && spacing.is_finite() && half_span.is_finite()) {
            return Err(Error::invalid("frequency grid", "spacing and span must be positive"));
        }
        let h = (half_span / spacing).ceil() as i64;
        let c = (center / spacing).round() as i64;
        Ok(FrequencyGrid { first: c - h, len: (2 * h + 1) as usize, spacing })
    }

    pub fn omega(&self, i: usize) -> f64 {
        (self.first + i as i64) as f64 * self.spacing
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.omega(i)).collect()
    }

    /// Δ/ħ in rad/fs.
    pub fn angular_spacing(&self) -> f64 {
        self.spacing / HBAR
    }

    pub fn is_zero_centered(&self) -> bool {
        self.first <= 0 && self.first + self.len as i64 - 1 == -self.first
    }

    /// Stable digest of the grid definition.
    pub fn describe(&self) -> String {
        format!("first={} len={} spacing={:?}", self.first, self.len, self.spacing)
    }
}

/// Lattice dressing of a transition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dressing {
    /// Full frequency-dependent lattice sum.
    Lattice(LatticeSpec),
    /// Frequency-independent value (e.g. frozen at the pulse carrier).
    Constant(C64),
}

impl Dressing {
    pub fn values(&self, t: &TransitionSpec, q: f64, grid: &FrequencyGrid) -> Result<Vec<C64>> {
        match self {
            Dressing::Constant(s) => Ok(vec![*s; grid.len]),
            Dressing::Lattice(l) => {
                if !t.dipole_allowed {
                    return Ok(vec![ZERO; grid.len]);
                }
                let p = t.as_particle();
                (0..grid.len).into_par_iter().map(|i| lattice_sum_self(l, &p, q, grid.omega(i))).collect()
            }
        }
    }
}

pub fn pulse_spectrum(p: &PulseSpec, grid: &FrequencyGrid) -> Vec<C64> {
    (0..grid.len).map(|i| p.spectrum_at(grid.omega(i))).collect()
}

/// Evaluation strategy for discrete convolutions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Direct,
    Fft,
}

/// How the imaginary part in the population equation is taken.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImagPart {
    /// Imaginary part of the time-domain product, (X(ω) − X*(−ω))/2i.
    #[default]
    TimeDomain,
    /// Imaginary part of each frequency sample of the convolved array.
    Pointwise,
}

fn check_same(a: &[C64], b: &[C64], grid: &FrequencyGrid) -> Result<()> {
    if a.len() != grid.len || b.len() != grid.len {
        return Err(Error::GridMismatch(format!("arrays of length {} and {} on a grid of {}", a.len(), b.len(), grid.len)));
    }
    Ok(())
}

fn fft_linear(a: &[C64], b: &[C64], conj_b_reversed: bool) -> Vec<C64> {
    let n = a.len() + b.len() - 1;
    let size = n.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let mut x = vec![ZERO; size];
    x[..a.len()].copy_from_slice(a);
    let mut y = vec![ZERO; size];
    if conj_b_reversed {
        for (i, v) in b.iter().rev().enumerate() {
            y[i] = v.conj();
        }
    } else {
        y[..b.len()].copy_from_slice(b);
    }
    fwd.process(&mut x);
    fwd.process(&mut y);
    for (u, v) in x.iter_mut().zip(&y) {
        *u *= v / size as f64;
    }
    inv.process(&mut x);
    x.truncate(n);
    x
}

/// (f∗g)(ω_i) = (Δ/2πħ)·Σ_j f(ω_j)·g(ω_i − ω_j), zero outside the grid.
pub fn freq_convolution(f: &[C64], g: &[C64], grid: &FrequencyGrid, method: Method) -> Result<Vec<C64>> {
    check_same(f, g, grid)?;
    let n = grid.len as i64;
    let w = grid.angular_spacing() / (2.0 * PI);
    // g index for lag value m·Δ is m − first.
    let out = match method {
        Method::Direct => (0..n)
            .into_par_iter()
            .map(|i| {
                let mut acc = ZERO;
                for j in 0..n {
                    let m = i - j - grid.first;
                    if (0..n).contains(&m) {
                        acc += f[j as usize] * g[m as usize];
                    }
                }
                acc * w
            })
            .collect(),
        Method::Fft => {
            let c = fft_linear(f, g, false);
            (0..n)
                .map(|i| {
                    let k = i - grid.first;
                    if (0..c.len() as i64).contains(&k) {
                        c[k as usize] * w
                    } else {
                        ZERO
                    }
                })
                .collect()
        }
    };
    Ok(out)
}

/// (Δ/2πħ)·Σ_j a_{j+k}·conj(b_j) for lags k = −max_lag..=max_lag: the
/// spectrum of a(t)·b*(t) when a and b share a grid.
pub fn freq_correlation(a: &[C64], b: &[C64], max_lag: usize, angular_spacing: f64, method: Method) -> Vec<C64> {
    let n = a.len() as i64;
    let w = angular_spacing / (2.0 * PI);
    let lags = -(max_lag as i64)..=max_lag as i64;
    match method {
        Method::Direct => lags
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| {
                let (lo, hi) = ((-k).max(0), (n - k).min(n));
                let mut acc = ZERO;
                for j in lo..hi {
                    acc += a[(j + k) as usize] * b[j as usize].conj();
                }
                acc * w
            })
            .collect(),
        Method::Fft => {
            // a ⊛ reverse(conj b): index k + (n − 1) holds lag k.
            let c = fft_linear(a, b, true);
            lags.map(|k| {
                let idx = k + n - 1;
                if (0..c.len() as i64).contains(&idx) {
                    c[idx as usize] * w
                } else {
                    ZERO
                }
            })
            .collect()
        }
    }
}

/// Coherence spectrum at quasi-momentum `q` together with the lattice sum
/// used for it.
#[derive(Clone, Debug, PartialEq)]
pub struct Coherence {
    pub grid: FrequencyGrid,
    pub q: f64,
    pub values: Vec<C64>,
    pub lattice_sum: Vec<C64>,
}

impl Coherence {
    fn zero(grid: FrequencyGrid, q: f64) -> Self {
        Coherence { grid, q, values: vec![ZERO; grid.len], lattice_sum: vec![ZERO; grid.len] }
    }
}

/// Pump-created 1→2 coherence. Only q = k∥ is driven; any other q is zero.
pub fn first_order_coherence(
    dressing: &Dressing,
    t12: &TransitionSpec,
    p_inv0: f64,
    pump: &PulseSpec,
    q: f64,
    k_parallel: f64,
    grid: &FrequencyGrid,
) -> Result<Coherence> {
    if p_inv0 > 0.0 {
        return Err(Error::InversionRegime(p_inv0));
    }
    pump.validate()?;
    if q != k_parallel {
        return Ok(Coherence::zero(*grid, q));
    }
    let s = dressing.values(t12, q, grid)?;
    let f = pulse_spectrum(pump, grid);
    let values = (0..grid.len)
        .map(|i| {
            let den = C64::new(t12.gamma_t_rad / 2.0, -(grid.omega(i) - t12.omega_t)) + C64::i() * p_inv0 * s[i];
            -p_inv0 * HBAR * f[i] / den
        })
        .collect();
    Ok(Coherence { grid: *grid, q, values, lattice_sum: s })
}

/// Zero-momentum population spectrum stored as its rate R(ω), with
/// P(ω) = R(ω)/(ε_reg/ħ − iω/ħ).
#[derive(Clone, Debug, PartialEq)]
pub struct Population {
    pub grid: FrequencyGrid,
    pub rate: Vec<C64>,
    pub eps_reg: f64,
}

/// Per-point weights w_k such that (1/2π)∫ h(Ω)/(ε − iΩ) dΩ ≈ (1/2π)Σ w_k h(Ω_k)
/// exactly for piecewise-linear h on the grid (Ω in rad/fs).
fn pole_weights(grid: &FrequencyGrid, eps_reg: f64) -> Vec<C64> {
    let d = grid.angular_spacing();
    let eps = eps_reg / HBAR;
    let mut w = vec![ZERO; grid.len];
    for cell in 0..grid.len - 1 {
        let c = C64::new(eps, -(grid.omega(cell) / HBAR));
        let z = C64::new(0.0, -d) / c;
        let l1 = log1p_minus_z(z);
        let j0 = C64::i() * (z + l1);
        let j1 = c * l1;
        w[cell] += j0 - j1 / d;
        w[cell + 1] += j1 / d;
    }
    w
}

/// ln(1 + z) − z, accurate for small |z|.
fn log1p_minus_z(z: C64) -> C64 {
    if z.norm() < 1e-2 {
        let mut term = z;
        let mut acc = ZERO;
        for n in 2..16 {
            term *= -z;
            acc += term / n as f64 * -1.0;
        }
        -acc
    } else {
        (C64::new(1.0, 0.0) + z).ln() - z
    }
}

impl Population {
    /// Sampled P(ω) = R/(ε_reg/ħ − iω/ħ).
    pub fn values(&self) -> Vec<C64> {
        (0..self.grid.len)
            .map(|i| self.rate[i] / C64::new(self.eps_reg / HBAR, -self.grid.omega(i) / HBAR))
            .collect()
    }

    /// P(t) = (1/2π)∫ P(Ω) e^{−iΩt} dΩ with the zero-frequency pole
    /// integrated exactly.
    pub fn time_trace(&self, times: &[f64]) -> Vec<C64> {
        let w = pole_weights(&self.grid, self.eps_reg);
        times
            .iter()
            .map(|&t| {
                let mut acc = ZERO;
                for i in 0..self.grid.len {
                    acc += w[i] * self.rate[i] * C64::from_polar(1.0, -self.grid.omega(i) / HBAR * t);
                }
                acc / (2.0 * PI)
            })
            .collect()
    }
}

/// Second-order population on the zero-centred grid `grid0`.
pub fn second_order_population(
    first: &Coherence,
    t12: &TransitionSpec,
    pump: &PulseSpec,
    k_parallel: f64,
    grid0: &FrequencyGrid,
    eps_reg: f64,
    imag: ImagPart,
    method: Method,
) -> Result<Population> {
    if !grid0.is_zero_centered() {
        return Err(Error::GridMismatch("population grid must be centred on zero frequency".into()));
    }
    if grid0.spacing != first.grid.spacing {
        return Err(Error::GridMismatch("population and coherence grids need equal spacing".into()));
    }
    if !(eps_reg > 0.0 && eps_reg.is_finite()) {
        return Err(Error::invalid("eps_reg", "must be > 0"));
    }
    if first.q != k_parallel {
        return Ok(Population { grid: *grid0, rate: vec![ZERO; grid0.len], eps_reg });
    }
    let g1 = &first.grid;
    let sigma = &first.values;
    let drive = pulse_spectrum(pump, g1);
    let dressed: Vec<C64> = sigma.iter().zip(&first.lattice_sum).map(|(a, s)| a * s / HBAR).collect();
    let h = ((grid0.len - 1) / 2) as usize;
    let dw = g1.angular_spacing();
    let self_corr = freq_correlation(sigma, sigma, h, dw, method);
    let x = freq_correlation(&dressed, sigma, h, dw, method);
    let fs = freq_correlation(&drive, sigma, h, dw, method);
    let sf = freq_correlation(sigma, &drive, h, dw, method);
    let n = grid0.len;
    let rate = (0..n)
        .map(|i| {
            let lattice = match imag {
                ImagPart::TimeDomain => C64::i() * (x[i] - x[n - 1 - i].conj()),
                ImagPart::Pointwise => C64::new(-2.0 * x[i].im, 0.0),
            };
            -t12.gamma_t_rad / HBAR * self_corr[i] + lattice + fs[i] + sf[i]
        })
        .collect();
    Ok(Population { grid: *grid0, rate, eps_reg })
}

/// Probe-driven 2→3 coherence at q = k∥ on `grid`.
pub fn third_order_coherence(
    population: &Population,
    dressing: &Dressing,
    t23: &TransitionSpec,
    probe: &PulseSpec,
    q: f64,
    k_parallel: f64,
    grid: &FrequencyGrid,
) -> Result<Coherence> {
    probe.validate()?;
    if q != k_parallel {
        return Ok(Coherence::zero(*grid, q));
    }
    let s = dressing.values(t23, q, grid)?;
    let weights = pole_weights(&population.grid, population.eps_reg);
    let wr: Vec<C64> = weights.iter().zip(&population.rate).map(|(w, r)| w * r).collect();
    let pg = &population.grid;
    let values = (0..grid.len)
        .into_par_iter()
        .map(|i| {
            let w = grid.omega(i);
            let mut acc = ZERO;
            for (k, c) in wr.iter().enumerate() {
                acc += c * probe.spectrum_at(w - pg.omega(k));
            }
            let numerator = acc / (2.0 * PI);
            let den = C64::new(t23.gamma_t_rad / 2.0, -(w - t23.omega_t)) - C64::i() * s[i];
            HBAR * numerator / den
        })
        .collect();
    Ok(Coherence { grid: *grid, q, values, lattice_sum: s })
}

/// 3πΓ(ħc)²(ω/ω_t³)·Im[i·σ/(ħF)] where |F| exceeds the floor; masked elsewhere.
pub fn band_extinction(coherence: &Coherence, pulse: &PulseSpec, t: &TransitionSpec, quantity: &str) -> SpectrumResult {
    let g = &coherence.grid;
    let f = pulse_spectrum(pulse, g);
    let peak = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let values = (0..g.len)
        .map(|i| {
            if peak == 0.0 || f[i].norm() <= SPECTRUM_FLOOR * peak {
                return None;
            }
            let w = g.omega(i);
            let r = C64::i() * coherence.values[i] / (HBAR * f[i]);
            Some(extinction_prefactor(t.omega_t, t.gamma_t_rad, w) * r.im)
        })
        .collect();
    SpectrumResult::new(quantity, "nm^2", vec![Axis::new("omega", "eV", g.omegas())], values)
}

pub fn probe_extinction_spectrum(third: &Coherence, probe: &PulseSpec, t23: &TransitionSpec) -> SpectrumResult {
    band_extinction(third, probe, t23, "probe_extinction")
}

pub fn pump_extinction_spectrum(first: &Coherence, pump: &PulseSpec, t12: &TransitionSpec) -> SpectrumResult {
    band_extinction(first, pump, t12, "pump_extinction")
}

/// Complete pump-probe scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct PumpProbeSetup {
    pub dressing12: Dressing,
    pub dressing23: Dressing,
    pub t12: TransitionSpec,
    pub t23: TransitionSpec,
    pub p_inv0: f64,
    pub pump: PulseSpec,
    pub probe: PulseSpec,
    pub k_parallel: f64,
    pub spacing: f64,
    /// Half span of each sub-grid in pulse spectral widths.
    pub span_widths: f64,
    pub eps_reg: f64,
    pub imag: ImagPart,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PumpProbeResult {
    pub first: Coherence,
    pub population: Population,
    pub third: Coherence,
    pub pump_extinction: SpectrumResult,
    pub probe_extinction: SpectrumResult,
}

impl PumpProbeSetup {
    pub fn grids(&self) -> Result<(FrequencyGrid, FrequencyGrid, FrequencyGrid)> {
        let width = self.pump.spectral_width().max(self.probe.spectral_width());
        let half = self.span_widths * width;
        let pump = FrequencyGrid::centered(self.pump.center, half, self.spacing)?;
        let pop = FrequencyGrid::centered(0.0, half, self.spacing)?;
        let probe = FrequencyGrid::centered(self.probe.center, half, self.spacing)?;
        for g in [&pump, &probe] {
            if g.omega(0) <= 0.0 {
                return Err(Error::invalid("pulse", "spectral window extends to non-positive frequency"));
            }
        }
        Ok((pump, pop, probe))
    }

    pub fn run(&self) -> Result<PumpProbeResult> {
        self.t12.validate()?;
        self.t23.validate()?;
        if !(self.span_widths >= 10.0) {
            return Err(Error::invalid("span_widths", "grids must cover at least 10 pulse bandwidths"));
        }
        let (g1, g0, g3) = self.grids()?;
        let q = self.k_parallel;
        let first = first_order_coherence(&self.dressing12, &self.t12, self.p_inv0, &self.pump, q, q, &g1)?;
        let population = second_order_population(&first, &self.t12, &self.pump, q, &g0, self.eps_reg, self.imag, self.method)?;
        let third = third_order_coherence(&population, &self.dressing23, &self.t23, &self.probe, q, q, &g3)?;
        let pump_extinction = pump_extinction_spectrum(&first, &self.pump, &self.t12);
        let probe_extinction = probe_extinction_spectrum(&third, &self.probe, &self.t23);
        Ok(PumpProbeResult { first, population, third, pump_extinction, probe_extinction })
    }
}
