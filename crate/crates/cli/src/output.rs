//! CSV/JSON writers and the run manifest.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use slr_core::spectrum::SpectrumResult;

use crate::config::{Config, Format};
use crate::error::CliError;
use crate::runner::{Layout, RunOutput, Table};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub file: String,
    pub sha256: String,
}

/// Everything needed to repeat a run. No paths or timestamps, so reruns are
/// byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: String,
    pub workers: usize,
    pub format: Format,
    pub config: Config,
    pub derived: Map<String, Value>,
    pub warnings: Vec<String>,
    pub outputs: Vec<FileEntry>,
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn cell(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Long layout: one row per sample with every axis coordinate, the value and
/// a `masked` flag. Masked samples leave the value empty.
pub fn long_csv(r: &SpectrumResult) -> String {
    let mut s = String::new();
    for a in &r.axes {
        let _ = write!(s, "{}_{},", a.name, a.unit);
    }
    let _ = writeln!(s, "{},masked", r.quantity);
    let shape = r.shape();
    for (flat, v) in r.values.iter().enumerate() {
        let mut rem = flat;
        let mut idx = vec![0; shape.len()];
        for d in (0..shape.len()).rev() {
            idx[d] = rem % shape[d];
            rem /= shape[d];
        }
        for (d, a) in r.axes.iter().enumerate() {
            s.push_str(&num(a.values[idx[d]]));
            s.push(',');
        }
        let _ = writeln!(s, "{},{}", cell(*v), u8::from(v.is_none()));
    }
    s
}

/// Matrix layout for two-axis results: header row of the second axis, then one
/// row per first-axis value.
pub fn matrix_csv(r: &SpectrumResult) -> String {
    assert_eq!(r.axes.len(), 2, "matrix layout needs two axes");
    let (rows, cols) = (&r.axes[0], &r.axes[1]);
    let mut s = format!("{}_{}\\{}_{}", rows.name, rows.unit, cols.name, cols.unit);
    for c in &cols.values {
        s.push(',');
        s.push_str(&num(*c));
    }
    s.push('\n');
    for (i, k) in rows.values.iter().enumerate() {
        s.push_str(&num(*k));
        for v in r.row(i) {
            s.push(',');
            s.push_str(&cell(*v));
        }
        s.push('\n');
    }
    s
}

fn nested(r: &SpectrumResult) -> Value {
    let shape = r.shape();
    fn build(vals: &[Option<f64>], shape: &[usize]) -> Value {
        if shape.len() <= 1 {
            return Value::Array(vals.iter().map(|v| json!(v)).collect());
        }
        let stride = vals.len() / shape[0];
        Value::Array(vals.chunks(stride).map(|c| build(c, &shape[1..])).collect())
    }
    build(&r.values, &shape)
}

fn table_json(t: &Table) -> Value {
    let r = &t.result;
    json!({
        "name": t.suffix,
        "quantity": r.quantity,
        "unit": r.unit,
        "axes": r.axes,
        "shape": r.shape(),
        "values": nested(r),
        "warnings": r.warnings,
    })
}

fn file_name(stem: &str, suffix: &str, ext: &str) -> String {
    if suffix.is_empty() {
        format!("{stem}.{ext}")
    } else {
        format!("{stem}_{suffix}.{ext}")
    }
}

fn sha(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Renders every file of the bundle, manifest last.
pub fn render(config: &Config, stem: &str, workers: usize, format: Format, run: &RunOutput) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    if matches!(format, Format::Csv | Format::Both) {
        for t in &run.tables {
            let body = match t.layout {
                Layout::Long => long_csv(&t.result),
                Layout::Matrix => matrix_csv(&t.result),
            };
            files.push((file_name(stem, &t.suffix, "csv"), body.into_bytes()));
        }
    }
    if matches!(format, Format::Json | Format::Both) {
        let doc = json!({
            "version": VERSION,
            "scenario": config.scenario.kind(),
            "config": config,
            "derived": run.derived,
            "results": run.tables.iter().map(table_json).collect::<Vec<_>>(),
        });
        let mut body = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        body.push(b'\n');
        files.push((file_name(stem, "", "json"), body));
    }
    let manifest = Manifest {
        version: VERSION.into(),
        workers,
        format,
        config: config.clone(),
        derived: run.derived.clone(),
        warnings: run.tables.iter().flat_map(|t| t.result.warnings.iter().cloned()).collect(),
        outputs: files.iter().map(|(n, b)| FileEntry { file: n.clone(), sha256: sha(b) }).collect(),
    };
    let mut body = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    body.push(b'\n');
    files.push((file_name(stem, "manifest", "json"), body));
    Ok(files)
}

/// Writes into a staging directory and moves files into `out` only once all of
/// them exist. Nothing is left behind on failure.
pub fn commit(out: &Path, stem: &str, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::io(out.display(), e))?;
    let staging = out.join(format!(".staging-{stem}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&staging);
    let mut moved = Vec::new();
    let result = (|| {
        fs::create_dir(&staging).map_err(|e| CliError::io(staging.display(), e))?;
        for (name, body) in files {
            let p = staging.join(name);
            fs::write(&p, body).map_err(|e| CliError::io(p.display(), e))?;
        }
        for (name, _) in files {
            let dest = out.join(name);
            fs::rename(staging.join(name), &dest).map_err(|e| CliError::io(dest.display(), e))?;
            moved.push(dest);
        }
        Ok(())
    })();
    let _ = fs::remove_dir_all(&staging);
    match result {
        Ok(()) => Ok(moved),
        Err(e) => {
            for p in &moved {
                let _ = fs::remove_file(p);
            }
            Err(e)
        }
    }
}

pub fn read_manifest(path: &Path) -> Result<Manifest, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
