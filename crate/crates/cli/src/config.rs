//! Scenario files: strict TOML schema, defaults and validation.

use serde::{Deserialize, Serialize};

use slr_core::exciton::{PopulationState, TransitionSpec};
use slr_core::field_map::FieldGrid;
use slr_core::lattice_sums::{LatticeSpec, ParticleSpec};
use slr_core::optomechanics::OMParams;
use slr_core::pump_probe::{ImagPart, Method, PulseSpec, EPS_REG};
use slr_core::spectrum::piecewise_omegas;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Worker threads; CLI flag and SLR_WORKERS take precedence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output: OutputSpec,
    pub scenario: Scenario,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// File name stem; defaults to the preset name or scenario kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    Extinction(ExtinctionCfg),
    Dispersion(DispersionCfg),
    Fieldmap(FieldmapCfg),
    Optomech(OptomechCfg),
    SingleModeOm(SingleModeCfg),
    Exciton(ExcitonCfg),
    PumpProbe(PumpProbeCfg),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Extinction(_) => "extinction",
            Scenario::Dispersion(_) => "dispersion",
            Scenario::Fieldmap(_) => "fieldmap",
            Scenario::Optomech(_) => "optomech",
            Scenario::SingleModeOm(_) => "single-mode-om",
            Scenario::Exciton(_) => "exciton",
            Scenario::PumpProbe(_) => "pump-probe",
        }
    }
}

/// Frequency samples in eV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OmegaGrid {
    Uniform { lo: f64, hi: f64, points: usize },
    /// Step `fine` within `window` of each anchor, `coarse` elsewhere.
    Piecewise { lo: f64, hi: f64, anchors: Vec<f64>, window: f64, fine: f64, coarse: f64 },
    List { values: Vec<f64> },
}

impl OmegaGrid {
    pub fn resolve(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let bad = |why: &str| CliError::Config(format!("invalid {name}: {why}"));
        let v = match self {
            OmegaGrid::Uniform { lo, hi, points } => {
                if *points < 2 || !(hi > lo) {
                    return Err(bad("needs points >= 2 and hi > lo"));
                }
                (0..*points).map(|i| lo + (hi - lo) * i as f64 / (*points - 1) as f64).collect()
            }
            OmegaGrid::Piecewise { lo, hi, anchors, window, fine, coarse } => {
                piecewise_omegas(*lo, *hi, anchors, *window, *fine, *coarse).map_err(|e| bad(&e.to_string()))?
            }
            OmegaGrid::List { values } => values.clone(),
        };
        if v.is_empty() || v.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(bad("frequencies must be positive and finite"));
        }
        if v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("frequencies must be strictly increasing"));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtinctionCfg {
    pub particle: ParticleSpec,
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub k_parallel: f64,
    pub omegas: OmegaGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionCfg {
    pub particle: ParticleSpec,
    pub lattice: LatticeSpec,
    /// In-plane momenta (1/nm); same grammar as frequency grids.
    pub k_parallels: OmegaGrid,
    pub omegas: OmegaGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldmapCfg {
    pub particle: ParticleSpec,
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub k_parallel: f64,
    pub omega: f64,
    pub grid: FieldGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptomechCfg {
    pub particle: ParticleSpec,
    pub lattice: LatticeSpec,
    pub om: OMParams,
    #[serde(default)]
    pub k_parallel: f64,
    pub omegas: OmegaGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleModeCfg {
    pub particle: ParticleSpec,
    pub om: OMParams,
    /// Plasmon–vibration coupling (eV).
    #[serde(default = "default_g")]
    pub g: f64,
    pub omegas: OmegaGrid,
}

fn default_g() -> f64 {
    0.01
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateCfg {
    pub label: String,
    pub populations: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitonCfg {
    pub lattice: LatticeSpec,
    pub transitions: Vec<TransitionSpec>,
    pub states: Vec<StateCfg>,
    #[serde(default)]
    pub k_parallel: f64,
    pub omegas: OmegaGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpProbeCfg {
    pub lattice: LatticeSpec,
    pub t12: TransitionSpec,
    pub t23: TransitionSpec,
    #[serde(default = "default_p_inv0")]
    pub p_inv0: f64,
    pub pump: PulseSpec,
    pub probe: PulseSpec,
    #[serde(default)]
    pub k_parallel: f64,
    #[serde(default = "default_spacing")]
    pub spacing: f64,
    #[serde(default = "default_span")]
    pub span_widths: f64,
    #[serde(default = "default_eps")]
    pub eps_reg: f64,
    #[serde(default)]
    pub imag: ImagPart,
    #[serde(default)]
    pub method: Method,
    /// Sample times (fs) for the population trace.
    pub trace_times: OmegaGrid,
}

fn default_p_inv0() -> f64 {
    -1.0
}

fn default_spacing() -> f64 {
    5e-4
}

fn default_span() -> f64 {
    12.0
}

fn default_eps() -> f64 {
    EPS_REG
}

fn physics(scope: &str) -> impl Fn(slr_core::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("{scope}: {e}"))
}

impl Config {
    /// Checks every physical parameter before anything is computed.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be >= 1".into()));
        }
        if let Some(stem) = &self.output.stem {
            file_safe(stem, "output.stem")?;
        }
        match &self.scenario {
            Scenario::Extinction(c) => {
                c.particle.validate().map_err(physics("scenario.particle"))?;
                c.lattice.validate().map_err(physics("scenario.lattice"))?;
                finite(c.k_parallel, "scenario.k_parallel")?;
                c.omegas.resolve("scenario.omegas")?;
            }
            Scenario::Dispersion(c) => {
                c.particle.validate().map_err(physics("scenario.particle"))?;
                c.lattice.validate().map_err(physics("scenario.lattice"))?;
                c.omegas.resolve("scenario.omegas")?;
                resolve_momenta(&c.k_parallels)?;
            }
            Scenario::Fieldmap(c) => {
                c.particle.validate().map_err(physics("scenario.particle"))?;
                c.lattice.validate().map_err(physics("scenario.lattice"))?;
                c.grid.validate().map_err(physics("scenario.grid"))?;
                finite(c.k_parallel, "scenario.k_parallel")?;
                if !(c.omega > 0.0 && c.omega.is_finite()) {
                    return Err(CliError::Config("invalid scenario.omega: must be > 0".into()));
                }
            }
            Scenario::Optomech(c) => {
                c.particle.validate().map_err(physics("scenario.particle"))?;
                c.lattice.validate().map_err(physics("scenario.lattice"))?;
                c.om.validate().map_err(physics("scenario.om"))?;
                finite(c.k_parallel, "scenario.k_parallel")?;
                c.omegas.resolve("scenario.omegas")?;
            }
            Scenario::SingleModeOm(c) => {
                c.particle.validate().map_err(physics("scenario.particle"))?;
                c.om.validate().map_err(physics("scenario.om"))?;
                if !(c.g >= 0.0 && c.g.is_finite()) {
                    return Err(CliError::Config("invalid scenario.g: must be >= 0".into()));
                }
                let ws = c.om.sideband();
                if (ws - c.particle.omega0).abs() > 1e-9 * c.particle.omega0 {
                    return Err(CliError::Config(
                        "invalid scenario.om: single-mode model needs omega_laser +/- omega_vib = particle.omega0".into(),
                    ));
                }
                c.omegas.resolve("scenario.omegas")?;
            }
            Scenario::Exciton(c) => {
                c.lattice.validate().map_err(physics("scenario.lattice"))?;
                for t in &c.transitions {
                    t.validate().map_err(physics("scenario.transitions"))?;
                }
                if c.states.is_empty() {
                    return Err(CliError::Config("scenario.states must not be empty".into()));
                }
                for s in &c.states {
                    file_safe(&s.label, "scenario.states.label")?;
                    let pop = PopulationState::new(s.populations.clone()).map_err(physics("scenario.states"))?;
                    for t in &c.transitions {
                        let p = pop.inversion(t).map_err(physics("scenario.states"))?;
                        if p > 0.0 {
                            return Err(CliError::Config(format!(
                                "scenario.states '{}': inversion {p} on {}->{} is outside the absorptive regime",
                                s.label, t.lower, t.upper
                            )));
                        }
                    }
                }
                finite(c.k_parallel, "scenario.k_parallel")?;
                c.omegas.resolve("scenario.omegas")?;
            }
            Scenario::PumpProbe(c) => {
                c.lattice.validate().map_err(physics("scenario.lattice"))?;
                c.t12.validate().map_err(physics("scenario.t12"))?;
                c.t23.validate().map_err(physics("scenario.t23"))?;
                c.pump.validate().map_err(physics("scenario.pump"))?;
                c.probe.validate().map_err(physics("scenario.probe"))?;
                if c.p_inv0 > 0.0 {
                    return Err(CliError::Config("invalid scenario.p_inv0: must be <= 0".into()));
                }
                if !(c.spacing > 0.0) || !(c.span_widths >= 10.0) || !(c.eps_reg > 0.0) {
                    return Err(CliError::Config(
                        "invalid scenario: spacing > 0, span_widths >= 10 and eps_reg > 0 required".into(),
                    ));
                }
                if !matches!(c.trace_times, OmegaGrid::Uniform { .. } | OmegaGrid::List { .. }) {
                    return Err(CliError::Config("scenario.trace_times must be uniform or a list".into()));
                }
                trace_times(&c.trace_times)?;
            }
        }
        Ok(())
    }
}

/// Names end up in file names.
fn file_safe(name: &str, key: &str) -> Result<(), CliError> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
        return Err(CliError::Config(format!("invalid {key}: use letters, digits, '-' and '_' only")));
    }
    Ok(())
}

fn finite(x: f64, name: &str) -> Result<(), CliError> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("invalid {name}: must be finite")))
    }
}

/// Momentum grids may include zero and negative values.
pub fn resolve_momenta(g: &OmegaGrid) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("invalid scenario.k_parallels: {why}"));
    let v: Vec<f64> = match g {
        OmegaGrid::Uniform { lo, hi, points } => {
            if *points < 1 || hi < lo {
                return Err(bad("needs points >= 1 and hi >= lo"));
            }
            if *points == 1 {
                vec![*lo]
            } else {
                (0..*points).map(|i| lo + (hi - lo) * i as f64 / (*points - 1) as f64).collect()
            }
        }
        OmegaGrid::List { values } => values.clone(),
        OmegaGrid::Piecewise { .. } => return Err(bad("piecewise grids are for frequencies")),
    };
    if v.is_empty() || v.iter().any(|k| !k.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(v)
}

/// Time samples may be negative.
pub fn trace_times(g: &OmegaGrid) -> Result<Vec<f64>, CliError> {
    match g {
        OmegaGrid::Uniform { lo, hi, points } if *points >= 2 && hi > lo => {
            Ok((0..*points).map(|i| lo + (hi - lo) * i as f64 / (*points - 1) as f64).collect())
        }
        OmegaGrid::List { values } if values.iter().all(|t| t.is_finite()) => Ok(values.clone()),
        _ => Err(CliError::Config("invalid scenario.trace_times".into())),
    }
}

pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let c: Config = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    c.validate()?;
    Ok(c)
}

pub fn to_toml(c: &Config) -> String {
    toml::to_string(c).expect("configs always serialize")
}
