use proptest::prelude::*;
use slr_core::field_map::{DrivenChain, FieldGrid};
use slr_core::lattice_sums::*;
use slr_core::linear_response::*;
use slr_core::numerics::{energy_from_wavelength, wavenumber, UnitVector3, C64};
use slr_core::spectrum::{argmax, fwhm, local_maxima, SpectrumGrid};
use slr_oracles::{dressing_prefactor, ring_double_sum, Ring};

use std::f64::consts::PI;

fn particle() -> ParticleSpec {
    ParticleSpec { omega0: energy_from_wavelength(500.0), gamma0_rad: 0.5, orientation: UnitVector3::Y }
}

#[test]
fn bare_particle_is_lorentzian() {
    let p = particle();
    let xs: Vec<f64> = (0..4001).map(|i| p.omega0 - 1.0 + i as f64 * 5e-4).collect();
    let ys: Vec<f64> = xs.iter().map(|&w| extinction_point(&p, C64::new(0.0, 0.0), w).unwrap()).collect();
    let expect = 3.0 * 500.0f64.powi(2) / (2.0 * PI);
    let at_resonance = extinction_point(&p, C64::new(0.0, 0.0), p.omega0).unwrap();
    assert!((at_resonance - expect).abs() < 1e-9 * expect);
    // The ω prefactor moves the maximum up by Γ²/(8ω₀) and raises it by ~0.25%.
    let (i, peak) = argmax(&ys).unwrap();
    let shift = p.gamma0_rad.powi(2) / (8.0 * p.omega0);
    assert!((xs[i] - p.omega0 - shift).abs() <= 1e-3);
    assert!(peak > expect && peak < 1.005 * expect, "{peak}");
    // Half-maximum points of ω/((ω₀ − ω)² + Γ²/4) sit about 0.25% further apart than Γ.
    let w = fwhm(&xs, &ys, i).unwrap();
    assert!((w - 0.501264).abs() < 5e-5, "{w}");
}

#[test]
fn extinction_composes_with_brute_force_sum() {
    let p = particle();
    let l = LatticeSpec::new(550.0, 20).unwrap();
    let ring = Ring { sites_m: 20, spacing: 550.0, axis: [1.0, 0.0, 0.0] };
    for (q, w) in [(0.0, 2.2), (0.004, 2.0), (-0.002, 2.6)] {
        let e = [0.0, 1.0, 0.0];
        let s = ring_double_sum(ring, e, e, [0.0; 3], q, wavenumber(w).unwrap()) * dressing_prefactor(0.5, p.omega0, 1.0, w);
        let oracle = 3.0 * PI * 0.5 * 197.3269804f64.powi(2) * w / p.omega0.powi(3)
            * (1.0 / (C64::new(p.omega0 - w, -0.25) - s)).im;
        let got = lattice_extinction(&l, &p, q, w).unwrap();
        assert!((got - oracle).abs() < 1e-10 * oracle.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frequency_scaling(s in 0.5f64..2.0, w in 1.8f64..2.8) {
        // ω₀, Γ₀, ω → s·(…) with a → a/s leaves kr and S/ω₀ invariant, so
        // σ scales as the squared wavelength, 1/s².
        let p = particle();
        let l = LatticeSpec::new(550.0, 400).unwrap();
        let ps = ParticleSpec { omega0: s * p.omega0, gamma0_rad: s * p.gamma0_rad, ..p };
        let ls = LatticeSpec { spacing: 550.0 / s, ..l };
        let a = lattice_extinction(&l, &p, 0.0, w).unwrap();
        let b = lattice_extinction(&ls, &ps, 0.0, s * w).unwrap();
        prop_assert!((b * s * s - a).abs() < 1e-9 * a.abs());
    }

    #[test]
    fn positive_near_resonance(a in 300.0f64..700.0, dw in -0.4f64..0.4) {
        let p = particle();
        let l = LatticeSpec::new(a, 1000).unwrap();
        prop_assert!(lattice_extinction(&l, &p, 0.0, p.omega0 + dw).unwrap() > 0.0);
    }
}

#[test]
fn dispersion_rows_are_spectra() {
    let p = particle();
    let l = LatticeSpec::new(550.0, 1000).unwrap();
    let grid = SpectrumGrid { omegas: (0..50).map(|i| 1.9 + 0.01 * i as f64).collect(), k_parallels: vec![0.0, 0.002, 0.004] };
    let map = dispersion_map(&l, &p, &grid).unwrap();
    assert_eq!(map.shape(), vec![3, 50]);
    for (r, &k) in grid.k_parallels.iter().enumerate() {
        let s = extinction_spectrum(&l, &p, k, &grid.omegas).unwrap();
        assert_eq!(map.row(r), &s.values[..]);
    }
}

#[test]
fn non_positive_frequency_rejected() {
    let l = LatticeSpec::new(550.0, 10).unwrap();
    assert!(extinction_spectrum(&l, &particle(), 0.0, &[1.0, 0.0]).is_err());
}

fn on_axis_row(chain: &DrivenChain, a: f64) -> (Vec<f64>, Vec<f64>) {
    let grid = FieldGrid { x_range: [-5.0 * a, 5.0 * a], z_range: [-2000.0, 2000.0], nx: 400, nz: 200, mask_radius: 10.0 };
    let map = chain.intensity_map(&grid).unwrap();
    let row = map.row(grid.nz / 2).iter().map(|v| v.unwrap()).collect();
    (grid.xs(), row)
}

#[test]
fn field_peaks_on_particles_off_resonance_of_lattice() {
    let p = particle();
    let l = LatticeSpec::new(300.0, 200).unwrap();
    let chain = DrivenChain::new(&l, &p, 0.0, p.omega0).unwrap();
    let (xs, row) = on_axis_row(&chain, 300.0);
    let cell = xs[1] - xs[0];
    let maxima = local_maxima(&row);
    assert!(!maxima.is_empty());
    for i in maxima {
        let d = (xs[i] / 300.0 - (xs[i] / 300.0).round()).abs() * 300.0;
        assert!(d <= cell, "maximum at {} not on a particle", xs[i]);
    }
}

#[test]
fn masked_samples_surround_particles() {
    let l = LatticeSpec::new(300.0, 10).unwrap();
    let chain = DrivenChain::new(&l, &particle(), 0.0, 2.0).unwrap();
    let grid = FieldGrid { x_range: [-310.0, 310.0], z_range: [-30.0, 30.0], nx: 62, nz: 6, mask_radius: 10.0 };
    let map = chain.intensity_map(&grid).unwrap();
    for (i, v) in map.values.iter().enumerate() {
        let (x, z) = (grid.xs()[i % 62], grid.zs()[i / 62]);
        let near = [-300.0, 0.0, 300.0].iter().any(|&c| ((x - c).powi(2) + z * z).sqrt() < 10.0);
        assert_eq!(v.is_none(), near, "x {x} z {z}");
    }
}
