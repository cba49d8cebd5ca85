//! Scenario runner: TOML configs and presets in, CSV/JSON bundles out.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

use std::path::{Path, PathBuf};

pub use config::{parse_config, Config, Format, Scenario};
pub use error::CliError;
pub use output::{read_manifest, Manifest};
pub use runner::{run_scenario, RunOutput};

/// Values from flags or the environment; they win over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: Config,
    pub out: PathBuf,
    pub workers: usize,
    pub format: Format,
    pub stem: String,
}

/// Applies overrides and strips the output directory, which is not part of the run.
pub fn resolve(mut config: Config, o: &Overrides) -> Result<Resolved, CliError> {
    config.validate()?;
    let workers = o
        .workers
        .or(config.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    if workers == 0 {
        return Err(CliError::Config("workers must be >= 1".into()));
    }
    let format = o.format.or(config.output.format).unwrap_or_default();
    let out = o.out.clone().or(config.output.dir.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
    let stem = config.output.stem.clone().unwrap_or_else(|| config.scenario.kind().to_string());
    config.workers = Some(workers);
    config.output.format = Some(format);
    config.output.dir = None;
    config.output.stem = Some(stem.clone());
    Ok(Resolved { config, out, workers, format, stem })
}

/// Computes on a dedicated pool and commits the bundle.
pub fn execute(r: &Resolved) -> Result<Vec<PathBuf>, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(r.workers)
        .build()
        .map_err(|e| CliError::Io(format!("worker pool: {e}")))?;
    let run = pool.install(|| run_scenario(&r.config))?;
    let files = output::render(&r.config, &r.stem, r.workers, r.format, &run)?;
    output::commit(&r.out, &r.stem, &files)
}

/// Settings recorded in a manifest, with the same override rules as a fresh run.
pub fn from_manifest(path: &Path, o: &Overrides) -> Result<Resolved, CliError> {
    let m = read_manifest(path)?;
    if m.version != output::VERSION {
        eprintln!("warning: manifest written by version {}, running {}", m.version, output::VERSION);
    }
    let mut config = m.config;
    config.workers = Some(m.workers);
    config.output.format = Some(m.format);
    resolve(config, o)
}
