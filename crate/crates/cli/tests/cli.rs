use proptest::prelude::*;
use slr_cli::config::to_toml;
use slr_cli::presets::{preset, NAMES};
use slr_cli::{parse_config, CliError};

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"
[scenario]
kind = "extinction"
k_parallel = 0.001

[scenario.particle]
omega0 = 2.48
gamma0_rad = 0.5
orientation = [0.0, 1.0, 0.0]

[scenario.lattice]
spacing = 550.0
sites = 40

[scenario.omegas]
mode = "uniform"
lo = 2.0
hi = 2.6
points = 61
"#;

const FIELD: &str = r#"
[scenario]
kind = "fieldmap"
omega = 2.3

[scenario.particle]
omega0 = 2.48
gamma0_rad = 0.5
orientation = [0.0, 1.0, 0.0]

[scenario.lattice]
spacing = 300.0
sites = 10

[scenario.grid]
x_range = [-310.0, 310.0]
z_range = [-30.0, 30.0]
nx = 62
nz = 6
"#;

const DISPERSION: &str = r#"
[scenario]
kind = "dispersion"

[scenario.particle]
omega0 = 2.48
gamma0_rad = 0.5
orientation = [0.0, 1.0, 0.0]

[scenario.lattice]
spacing = 550.0
sites = 40

[scenario.k_parallels]
mode = "list"
values = [0.0, 0.001, 0.002]

[scenario.omegas]
mode = "uniform"
lo = 2.0
hi = 2.5
points = 11
"#;

fn slr(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slr"))
        .args(args)
        .current_dir(dir)
        .env_remove("SLR_OUT_DIR")
        .env_remove("SLR_WORKERS")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir).map(|r| r.map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect()).unwrap_or_default();
    v.sort();
    v
}

#[test]
fn presets_round_trip_through_toml() {
    for name in NAMES {
        let c = preset(name).unwrap();
        c.validate().unwrap();
        assert_eq!(parse_config(&to_toml(&c)).unwrap(), c, "{name}");
    }
}

/// Paths of every table in the document, arrays of tables included.
fn tables(v: &toml::Value, path: Vec<String>, out: &mut Vec<Vec<String>>) {
    match v {
        toml::Value::Table(t) => {
            out.push(path.clone());
            for (k, x) in t {
                let mut p = path.clone();
                p.push(k.clone());
                tables(x, p, out);
            }
        }
        toml::Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                let mut p = path.clone();
                p.push(i.to_string());
                tables(x, p, out);
            }
        }
        _ => {}
    }
}

fn table_at<'a>(v: &'a mut toml::Value, path: &[String]) -> &'a mut toml::Table {
    let mut cur = v;
    for k in path {
        cur = match cur {
            toml::Value::Table(t) => t.get_mut(k).unwrap(),
            toml::Value::Array(a) => &mut a[k.parse::<usize>().unwrap()],
            _ => unreachable!(),
        };
    }
    cur.as_table_mut().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn injected_unknown_keys_are_rejected(which in 0..NAMES.len(), pick in any::<prop::sample::Index>(), key in "zz[a-z_]{0,10}", value in -1e3f64..1e3) {
        let base = to_toml(&preset(NAMES[which]).unwrap());
        let mut doc: toml::Value = toml::from_str(&base).unwrap();
        let mut paths = Vec::new();
        tables(&doc, Vec::new(), &mut paths);
        let path = pick.get(&paths).clone();
        let t = table_at(&mut doc, &path);
        prop_assume!(!t.contains_key(&key));
        t.insert(key.clone(), toml::Value::Float(value));
        let text = toml::to_string(&doc).unwrap();
        match parse_config(&text) {
            Err(CliError::Config(msg)) => prop_assert!(msg.contains(&key) || msg.contains("unknown"), "{msg}"),
            other => prop_assert!(false, "accepted {key} at {path:?}: {other:?}"),
        }
    }
}

#[test]
fn missing_key_is_named() {
    let text = SMALL.replace("gamma0_rad = 0.5\n", "");
    match parse_config(&text) {
        Err(CliError::Config(msg)) => assert!(msg.contains("gamma0_rad"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invariant_violation_names_the_invariant() {
    let text = SMALL.replace("sites = 40", "sites = 41");
    match parse_config(&text) {
        Err(CliError::Config(msg)) => assert!(msg.contains("sites"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = write(d, "ok.toml", SMALL);
    let out = slr(&["extinction", "--config", &ok, "--out", "o", "--workers", "1"], d);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = write(d, "bad.toml", &SMALL.replace("points = 61", "points = 61\nstep = 2"));
    assert_eq!(slr(&["extinction", "--config", &bad], d).status.code(), Some(2));
    assert_eq!(slr(&["dispersion", "--config", &ok], d).status.code(), Some(2));
    assert_eq!(slr(&["preset", "nope"], d).status.code(), Some(2));
    assert_eq!(slr(&["extinction", "--config", "missing.toml"], d).status.code(), Some(4));

    // Validates, then fails inside the physics: the pump spectrum reaches ω ≤ 0.
    let pp = to_toml(&preset("fig6").unwrap()).replace("center = 1.5", "center = 0.05");
    let pp = write(d, "pp.toml", &pp);
    let out = slr(&["pump-probe", "--config", &pp, "--out", "pp"], d);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(listing(&d.join("pp")).is_empty());

    // The output directory cannot be created under a regular file.
    write(d, "file", "");
    assert_eq!(slr(&["extinction", "--config", &ok, "--out", "file/o"], d).status.code(), Some(4));
}

#[test]
fn failed_commit_leaves_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = write(d, "ok.toml", SMALL);
    // A directory squatting on the JSON name makes the move fail after the CSV landed.
    fs::create_dir_all(d.join("o/extinction.json/x")).unwrap();
    let out = slr(&["extinction", "--config", &ok, "--out", "o"], d);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(listing(&d.join("o")), vec!["extinction.json".to_string()]);
}

#[test]
fn environment_overrides_out_dir_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let ok = write(d, "ok.toml", SMALL);
    let out = Command::new(env!("CARGO_BIN_EXE_slr"))
        .args(["extinction", "--config", &ok])
        .current_dir(d)
        .env("SLR_OUT_DIR", d.join("env-out"))
        .env("SLR_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let m = slr_cli::read_manifest(&d.join("env-out/extinction_manifest.json")).unwrap();
    assert_eq!(m.workers, 3);
    assert!(listing(&d.join("env-out")).iter().all(|f| !f.starts_with(".staging")));
}

#[test]
fn long_csv_masks_without_nan() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write(d, "f.toml", FIELD);
    assert!(slr(&["fieldmap", "--config", &cfg, "--out", "o", "--format", "csv"], d).status.success());
    assert_eq!(listing(&d.join("o")), vec!["fieldmap.csv", "fieldmap_manifest.json"]);
    let text = fs::read_to_string(d.join("o/fieldmap.csv")).unwrap();
    assert!(!text.to_lowercase().contains("nan"));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("z_nm,x_nm,intensity,masked"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 62 * 6);
    let masked = rows.iter().filter(|r| r[3] == "1").count();
    assert!(masked > 0);
    for r in &rows {
        assert_eq!(r.len(), 4);
        assert_eq!(r[2].is_empty(), r[3] == "1");
    }
}

#[test]
fn dispersion_matrix_layout_and_exact_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write(d, "d.toml", DISPERSION);
    assert!(slr(&["dispersion", "--config", &cfg, "--out", "o"], d).status.success());
    let text = fs::read_to_string(d.join("o/dispersion.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0].len(), 12);
    assert_eq!(rows[0][1], "2.0");
    assert_eq!(rows[0][11], "2.5");
    assert_eq!(rows.iter().skip(1).map(|r| r[0]).collect::<Vec<_>>(), ["0.0", "0.001", "0.002"]);
    // CSV text and JSON values agree to the bit.
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("o/dispersion.json")).unwrap()).unwrap();
    let values = &json["results"][0]["values"];
    for (i, r) in rows.iter().skip(1).enumerate() {
        for (j, cell) in r[1..].iter().enumerate() {
            assert_eq!(cell.parse::<f64>().unwrap().to_bits(), values[i][j].as_f64().unwrap().to_bits());
        }
    }
}

#[test]
fn rerun_from_manifest_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write(d, "f.toml", FIELD);
    assert!(slr(&["fieldmap", "--config", &cfg, "--out", "a", "--workers", "2"], d).status.success());
    assert!(slr(&["rerun", "a/fieldmap_manifest.json", "--out", "b"], d).status.success());
    let files = listing(&d.join("a"));
    assert_eq!(files, listing(&d.join("b")));
    for f in files {
        assert_eq!(fs::read(d.join("a").join(&f)).unwrap(), fs::read(d.join("b").join(&f)).unwrap(), "{f}");
    }
}

#[test]
fn data_files_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write(d, "s.toml", SMALL);
    for (w, o) in [("1", "w1"), ("4", "w4")] {
        assert!(slr(&["extinction", "--config", &cfg, "--out", o, "--workers", w, "--format", "csv"], d).status.success());
    }
    assert_eq!(fs::read(d.join("w1/extinction.csv")).unwrap(), fs::read(d.join("w4/extinction.csv")).unwrap());
}

#[test]
fn manifest_records_every_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = write(d, "s.toml", SMALL);
    assert!(slr(&["extinction", "--config", &cfg, "--out", "o"], d).status.success());
    let text = fs::read_to_string(d.join("o/extinction_manifest.json")).unwrap();
    for needle in ["\"omega0\": 2.48", "\"gamma0_rad\": 0.5", "\"spacing\": 550.0", "\"sites\": 40", "\"k_parallel\": 0.001", "\"points\": 61", "sha256"] {
        assert!(text.contains(needle), "{needle}");
    }
    assert!(!text.contains(&*d.to_string_lossy()));
}
