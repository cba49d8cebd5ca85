//! Dispatch from a validated config to the physics modules.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use slr_core::exciton::{crowding_warnings, exciton_extinction_spectrum, PopulationState};
use slr_core::field_map::DrivenChain;
use slr_core::linear_response::{dispersion_map, extinction_spectrum};
use slr_core::optomechanics::{gamma_p, molecular_linewidth, om_extinction_spectrum, rwa_warning, single_mode_om_spectrum};
use slr_core::pump_probe::{Dressing, PumpProbeSetup};
use slr_core::spectrum::{Axis, SpectrumGrid, SpectrumResult};

use crate::config::{resolve_momenta, trace_times, Config, Scenario};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// One row per sample: coordinates, value, mask flag.
    Long,
    /// Rows are the first axis, columns the second, header holds the second axis.
    Matrix,
}

#[derive(Clone, Debug)]
pub struct Table {
    /// Appended to the output stem; empty for single-table scenarios.
    pub suffix: String,
    pub layout: Layout,
    pub result: SpectrumResult,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    /// Resolved quantities not literally present in the config.
    pub derived: Map<String, Value>,
}

pub fn grid_hash(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    format!("{:x}", h.finalize())
}

fn grid_entry(values: &[f64]) -> Value {
    json!({
        "points": values.len(),
        "first": values.first(),
        "last": values.last(),
        "sha256": grid_hash(values),
    })
}

fn long(suffix: &str, result: SpectrumResult) -> Table {
    Table { suffix: suffix.into(), layout: Layout::Long, result }
}

/// Runs the scenario on the current rayon pool. Validation must already have passed.
pub fn run_scenario(config: &Config) -> Result<RunOutput, CliError> {
    let mut derived = Map::new();
    let tables = match &config.scenario {
        Scenario::Extinction(c) => {
            let ws = c.omegas.resolve("scenario.omegas")?;
            derived.insert("omegas".into(), grid_entry(&ws));
            vec![long("", extinction_spectrum(&c.lattice, &c.particle, c.k_parallel, &ws)?)]
        }
        Scenario::Dispersion(c) => {
            let ws = c.omegas.resolve("scenario.omegas")?;
            let ks = resolve_momenta(&c.k_parallels)?;
            derived.insert("omegas".into(), grid_entry(&ws));
            derived.insert("k_parallels".into(), grid_entry(&ks));
            let grid = SpectrumGrid { omegas: ws, k_parallels: ks };
            vec![Table { suffix: String::new(), layout: Layout::Matrix, result: dispersion_map(&c.lattice, &c.particle, &grid)? }]
        }
        Scenario::Fieldmap(c) => {
            derived.insert("x".into(), grid_entry(&c.grid.xs()));
            derived.insert("z".into(), grid_entry(&c.grid.zs()));
            let chain = DrivenChain::new(&c.lattice, &c.particle, c.k_parallel, c.omega)?;
            vec![long("", chain.intensity_map(&c.grid)?)]
        }
        Scenario::Optomech(c) => {
            let ws = c.omegas.resolve("scenario.omegas")?;
            derived.insert("omegas".into(), grid_entry(&ws));
            derived.insert("sideband".into(), json!(c.om.sideband()));
            derived.insert("gamma_p".into(), json!(gamma_p(&c.om, &c.particle)));
            derived.insert("molecular_linewidth".into(), json!(molecular_linewidth(&c.om, &c.particle)));
            vec![long("", om_extinction_spectrum(&c.lattice, &c.particle, &c.om, c.k_parallel, &ws)?)]
        }
        Scenario::SingleModeOm(c) => {
            let ws = c.omegas.resolve("scenario.omegas")?;
            derived.insert("omegas".into(), grid_entry(&ws));
            derived.insert("gamma_p".into(), json!(gamma_p(&c.om, &c.particle)));
            derived.insert("molecular_linewidth".into(), json!(molecular_linewidth(&c.om, &c.particle)));
            let s = single_mode_om_spectrum(c.g, &c.particle, &c.om, &ws)?;
            let axis = || vec![Axis::new("omega", "eV", ws.clone())];
            let mut cavity = SpectrumResult::from_dense("cavity_extinction", "normalized", axis(), s.cavity);
            cavity.warnings.extend(rwa_warning(&c.om, &c.particle));
            vec![
                long("cavity", cavity),
                long("molecular", SpectrumResult::from_dense("molecular_extinction", "normalized", axis(), s.molecular)),
            ]
        }
        Scenario::Exciton(c) => {
            let ws = c.omegas.resolve("scenario.omegas")?;
            derived.insert("omegas".into(), grid_entry(&ws));
            let mut out = Vec::new();
            let mut inversions = Map::new();
            for s in &c.states {
                let pop = PopulationState::new(s.populations.clone())?;
                let p: Vec<f64> = c.transitions.iter().map(|t| pop.inversion(t)).collect::<Result<_, _>>()?;
                inversions.insert(s.label.clone(), json!(p));
                let mut r = exciton_extinction_spectrum(&c.lattice, &c.transitions, &pop, c.k_parallel, &ws)?;
                r.warnings.extend(crowding_warnings(&c.transitions));
                out.push(long(&s.label, r));
            }
            derived.insert("inversions".into(), Value::Object(inversions));
            out
        }
        Scenario::PumpProbe(c) => {
            let setup = PumpProbeSetup {
                dressing12: Dressing::Lattice(c.lattice),
                dressing23: Dressing::Lattice(c.lattice),
                t12: c.t12,
                t23: c.t23,
                p_inv0: c.p_inv0,
                pump: c.pump,
                probe: c.probe,
                k_parallel: c.k_parallel,
                spacing: c.spacing,
                span_widths: c.span_widths,
                eps_reg: c.eps_reg,
                imag: c.imag,
                method: c.method,
            };
            let (g1, g0, g3) = setup.grids()?;
            for (name, g) in [("pump_grid", g1), ("population_grid", g0), ("probe_grid", g3)] {
                derived.insert(name.into(), json!({ "describe": g.describe(), "sha256": grid_hash(&g.omegas()) }));
            }
            derived.insert("pulse_temporal_width".into(), json!([c.pump.temporal_width(), c.probe.temporal_width()]));
            derived.insert("pulse_spectral_width".into(), json!([c.pump.spectral_width(), c.probe.spectral_width()]));
            let r = setup.run()?;
            let times = trace_times(&c.trace_times)?;
            derived.insert("trace_times".into(), grid_entry(&times));
            let trace: Vec<f64> = r.population.time_trace(&times).iter().map(|z| z.re).collect();
            vec![
                long("pump", r.pump_extinction),
                long("probe", r.probe_extinction),
                long("population", SpectrumResult::from_dense("population", "1", vec![Axis::new("t", "fs", times)], trace)),
            ]
        }
    };
    Ok(RunOutput { tables, derived })
}
