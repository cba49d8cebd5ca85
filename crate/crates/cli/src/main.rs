use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use slr_cli::presets::{default_for, preset, NAMES};
use slr_cli::{config, execute, from_manifest, parse_config, resolve, CliError, Config, Format, Overrides};

#[derive(Parser)]
#[command(name = "slr", version, about = "Surface lattice resonance scenarios")]
struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, env = "SLR_OUT_DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, env = "SLR_WORKERS")]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Extinction,
    Dispersion,
    Fieldmap,
    Optomech,
    SingleModeOm,
    Exciton,
    PumpProbe,
    /// Run a bundled preset.
    Preset {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// List preset names and exit.
        #[arg(long)]
        list: bool,
        /// Print the preset as TOML instead of running it.
        #[arg(long)]
        print_config: bool,
    },
    /// Repeat a run from its manifest.
    Rerun { manifest: PathBuf },
}

fn load(path: &PathBuf) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        e => e,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let o = Overrides { out: cli.out.clone(), workers: cli.workers, format: cli.format };
    let resolved = match &cli.command {
        Command::Preset { list: true, .. } => {
            for n in NAMES {
                println!("{n}");
            }
            return Ok(());
        }
        Command::Preset { name, print_config, .. } => {
            let c = preset(name.as_deref().unwrap_or_default())?;
            if *print_config {
                print!("{}", config::to_toml(&c));
                return Ok(());
            }
            resolve(c, &o)?
        }
        Command::Rerun { manifest } => from_manifest(manifest, &o)?,
        cmd => {
            let kind = match cmd {
                Command::Extinction => "extinction",
                Command::Dispersion => "dispersion",
                Command::Fieldmap => "fieldmap",
                Command::Optomech => "optomech",
                Command::SingleModeOm => "single-mode-om",
                Command::Exciton => "exciton",
                _ => "pump-probe",
            };
            let c = match &cli.config {
                Some(p) => load(p)?,
                None => preset(default_for(kind))?,
            };
            if c.scenario.kind() != kind {
                return Err(CliError::Config(format!("config describes a '{}' scenario, not '{kind}'", c.scenario.kind())));
            }
            resolve(c, &o)?
        }
    };
    for f in execute(&resolved)? {
        println!("{}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
