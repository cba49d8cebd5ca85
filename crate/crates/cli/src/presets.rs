//! Bundled scenarios for the published figure parameter sets.

use slr_core::exciton::TransitionSpec;
use slr_core::field_map::FieldGrid;
use slr_core::lattice_sums::{LatticeSpec, ParticleSpec};
use slr_core::numerics::energy_from_wavelength;
use slr_core::optomechanics::{Branch, OMParams};
use slr_core::pump_probe::{ImagPart, Method, PulseSpec, EPS_REG};
use slr_core::{UnitVector3, HBAR_C};

use std::f64::consts::PI;

use crate::config::*;
use crate::error::CliError;

pub const NAMES: [&str; 11] = [
    "fig1b",
    "dispersion",
    "fig2a",
    "fig2b",
    "fig3-red",
    "fig3-blue",
    "fig4-red",
    "fig4-blue",
    "fig4-gain",
    "fig5",
    "fig6",
];

/// Extinction maximum of the fig1b chain (eV), located on its fine grid.
pub const SLR_550: f64 = 2.23314;

/// First-order anomaly ħc·2π/a at normal incidence.
pub fn anomaly(spacing: f64) -> f64 {
    2.0 * PI * HBAR_C / spacing
}

fn gold_like() -> ParticleSpec {
    ParticleSpec { omega0: energy_from_wavelength(500.0), gamma0_rad: 0.5, orientation: UnitVector3::Y }
}

fn chain(spacing: f64, sites: usize) -> LatticeSpec {
    LatticeSpec { spacing, sites, axis: UnitVector3::X }
}

fn exciton_pair() -> (TransitionSpec, TransitionSpec) {
    let t12 = TransitionSpec { lower: 1, upper: 2, omega_t: 1.5, gamma_t_rad: 0.25, orientation: UnitVector3::Y, dipole_allowed: true };
    (t12, TransitionSpec { lower: 2, upper: 3, omega_t: 3.0, ..t12 })
}

fn named(name: &str, scenario: Scenario) -> Config {
    Config { workers: None, output: OutputSpec { dir: None, format: None, stem: Some(name.into()) }, scenario }
}

fn field_grid(spacing: f64) -> FieldGrid {
    FieldGrid { x_range: [-5.0 * spacing, 5.0 * spacing], z_range: [-2000.0, 2000.0], nx: 400, nz: 200, mask_radius: 10.0 }
}

fn fig3(branch: Branch) -> Scenario {
    let a = 550.0;
    Scenario::Optomech(OptomechCfg {
        particle: gold_like(),
        lattice: chain(a, 8000),
        om: OMParams {
            omega_vib: 0.2,
            gamma_vib: 0.0,
            // The Raman sideband sits on the SLR.
            omega_laser: SLR_550 - branch.sign() * 0.2,
            branch,
            raman_ratio: 0.3,
            offset: [0.5 * a, 0.0, 0.0],
            raman_orientation: UnitVector3::Y,
        },
        k_parallel: 0.0,
        omegas: OmegaGrid::Piecewise { lo: 1.9, hi: 2.6, anchors: vec![SLR_550], window: 0.05, fine: 2e-4, coarse: 2e-3 },
    })
}

fn fig4(branch: Branch, gamma_vib: f64, raman_ratio: f64) -> Scenario {
    Scenario::SingleModeOm(SingleModeCfg {
        particle: ParticleSpec { omega0: 1.0, gamma0_rad: 0.1, orientation: UnitVector3::Y },
        om: OMParams {
            omega_vib: 0.2,
            gamma_vib,
            omega_laser: 1.0 - branch.sign() * 0.2,
            branch,
            raman_ratio,
            offset: [275.0, 0.0, 0.0],
            raman_orientation: UnitVector3::Y,
        },
        g: 0.01,
        omegas: OmegaGrid::Uniform { lo: 0.9, hi: 1.1, points: 2001 },
    })
}

pub fn preset(name: &str) -> Result<Config, CliError> {
    let scenario = match name {
        "fig1b" => Scenario::Extinction(ExtinctionCfg {
            particle: gold_like(),
            lattice: chain(550.0, 8000),
            k_parallel: 0.0,
            omegas: OmegaGrid::Piecewise { lo: 1.5, hi: 3.0, anchors: vec![anomaly(550.0)], window: 0.1, fine: 5e-5, coarse: 5e-3 },
        }),
        "dispersion" => Scenario::Dispersion(DispersionCfg {
            particle: gold_like(),
            lattice: chain(550.0, 8000),
            k_parallels: OmegaGrid::Uniform { lo: 0.0, hi: 0.8 * PI / 550.0, points: 21 },
            omegas: OmegaGrid::Uniform { lo: 1.2, hi: 3.0, points: 1801 },
        }),
        "fig2a" => {
            let p = gold_like();
            Scenario::Fieldmap(FieldmapCfg { particle: p, lattice: chain(300.0, 2000), k_parallel: 0.0, omega: p.omega0, grid: field_grid(300.0) })
        }
        "fig2b" => Scenario::Fieldmap(FieldmapCfg {
            particle: gold_like(),
            lattice: chain(550.0, 8000),
            k_parallel: 0.0,
            omega: SLR_550,
            grid: field_grid(550.0),
        }),
        "fig3-red" => fig3(Branch::Red),
        "fig3-blue" => fig3(Branch::Blue),
        // Γ_vib = 10γ_p = 0.1Γ₀ needs (p/μ₀)² = 0.01.
        "fig4-red" => fig4(Branch::Red, 0.01, 0.1),
        "fig4-blue" => fig4(Branch::Blue, 0.01, 0.1),
        // γ_p = 10Γ_vib.
        "fig4-gain" => fig4(Branch::Blue, 1e-3, 0.1f64.sqrt()),
        "fig5" => {
            let (t12, t23) = exciton_pair();
            Scenario::Exciton(ExcitonCfg {
                lattice: chain(415.0, 1000),
                transitions: vec![t12, t23],
                states: vec![
                    StateCfg { label: "ground".into(), populations: vec![1.0, 0.0, 0.0] },
                    StateCfg { label: "pumped".into(), populations: vec![0.5, 0.5, 0.0] },
                ],
                k_parallel: 0.0,
                omegas: OmegaGrid::Piecewise { lo: 1.0, hi: 3.2, anchors: vec![anomaly(415.0)], window: 0.1, fine: 5e-5, coarse: 1e-3 },
            })
        }
        "fig6" => {
            let (t12, t23) = exciton_pair();
            Scenario::PumpProbe(PumpProbeCfg {
                lattice: chain(415.0, 1000),
                t12,
                t23,
                p_inv0: -1.0,
                pump: PulseSpec { center: 1.5, fwhm: 40.0, amplitude: 1.0, delay: 0.0 },
                probe: PulseSpec { center: 3.0, fwhm: 40.0, amplitude: 1.0, delay: 50.0 },
                k_parallel: 0.0,
                spacing: 5e-4,
                span_widths: 12.0,
                eps_reg: EPS_REG,
                imag: ImagPart::TimeDomain,
                method: Method::Direct,
                trace_times: OmegaGrid::Uniform { lo: -100.0, hi: 300.0, points: 401 },
            })
        }
        _ => return Err(CliError::Config(format!("unknown preset '{name}' (known: {})", NAMES.join(", ")))),
    };
    Ok(named(name, scenario))
}

/// Preset used by a bare subcommand.
pub fn default_for(kind: &str) -> &'static str {
    match kind {
        "extinction" => "fig1b",
        "dispersion" => "dispersion",
        "fieldmap" => "fig2b",
        "optomech" => "fig3-red",
        "single-mode-om" => "fig4-red",
        "exciton" => "fig5",
        _ => "fig6",
    }
}
