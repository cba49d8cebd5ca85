//! Runs presets through the CLI library and reads the resulting files back.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use slr_cli::{execute, from_manifest, presets::preset, resolve, CliError, Overrides};

#[derive(Clone, Debug)]
pub struct Bundle {
    pub dir: PathBuf,
    pub stem: String,
    pub files: Vec<PathBuf>,
    pub seconds: f64,
}

impl Bundle {
    pub fn path(&self, suffix: &str, ext: &str) -> PathBuf {
        if suffix.is_empty() {
            self.dir.join(format!("{}.{ext}", self.stem))
        } else {
            self.dir.join(format!("{}_{suffix}.{ext}", self.stem))
        }
    }

    pub fn csv(&self, suffix: &str) -> Csv {
        Csv::read(&self.path(suffix, "csv"))
    }

    pub fn manifest(&self) -> PathBuf {
        self.path("manifest", "json")
    }
}

fn timed(f: impl FnOnce() -> Result<Vec<PathBuf>, CliError>) -> Result<(Vec<PathBuf>, f64), CliError> {
    let t = Instant::now();
    let files = f()?;
    Ok((files, t.elapsed().as_secs_f64()))
}

pub fn run_preset(name: &str, out: &Path, workers: usize) -> Result<Bundle, CliError> {
    let o = Overrides { out: Some(out.to_path_buf()), workers: Some(workers), format: None };
    let r = resolve(preset(name)?, &o)?;
    let (files, seconds) = timed(|| execute(&r))?;
    Ok(Bundle { dir: out.to_path_buf(), stem: r.stem, files, seconds })
}

pub fn rerun(manifest: &Path, out: &Path) -> Result<Bundle, CliError> {
    let o = Overrides { out: Some(out.to_path_buf()), ..Overrides::default() };
    let r = from_manifest(manifest, &o)?;
    let (files, seconds) = timed(|| execute(&r))?;
    Ok(Bundle { dir: out.to_path_buf(), stem: r.stem, files, seconds })
}

/// Numeric CSV; empty cells read as `None`.
#[derive(Clone, Debug)]
pub struct Csv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Csv {
    pub fn read(path: &Path) -> Csv {
        let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default().split(',').map(String::from).collect();
        let rows = lines
            .map(|l| l.split(',').map(|c| if c.is_empty() { None } else { Some(c.parse().expect("numeric cell")) }).collect())
            .collect();
        Csv { header, rows }
    }

    pub fn column(&self, i: usize) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r[i]).collect()
    }

    /// First column and value column of a one-axis long table, masked rows dropped.
    pub fn series(&self) -> (Vec<f64>, Vec<f64>) {
        self.rows.iter().filter_map(|r| Some((r[0]?, r[1]?))).unzip()
    }
}
