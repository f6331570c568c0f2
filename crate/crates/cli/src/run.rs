//! Running an experiment and writing its artifacts.
//!
//! A run directory `<out>/<experiment>_<timestamp>/` holds `result.csv`,
//! `scalars.csv`, `manifest.txt` and, for parameter scans, `scan.csv`. The
//! experiment is evaluated completely before anything touches the disk, and
//! the files are first written to a hidden staging directory that is renamed
//! into place only once all of them exist.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use qtraj::experiments::{
    run_brownian, run_diffraction, run_early_arrivals, run_tunneling, ExperimentResult, Table,
};

use crate::config::{ExperimentConfig, RunConfig, Threads};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("cannot build the worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Simulation(#[from] qtraj::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Evaluate the experiment on a pool of the configured size.
pub fn compute(cfg: &RunConfig) -> Result<ExperimentResult, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Threads::Fixed(n) = cfg.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    let result = pool.install(|| match &cfg.experiment {
        ExperimentConfig::Brownian(c) => run_brownian(c),
        ExperimentConfig::Diffraction(c) => run_diffraction(c),
        ExperimentConfig::Tunneling(c) => run_tunneling(c),
        ExperimentConfig::EarlyArrivals(c) => run_early_arrivals(c),
    })?;
    Ok(result)
}

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

/// Header row of column names, then one row per grid point.
pub fn table_csv(table: &Table) -> String {
    let mut out = table.names().join(",");
    out.push('\n');
    for row in 0..table.rows() {
        let cells: Vec<String> = table.columns().iter().map(|c| format_float(c.values[row])).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `name,value` rows; an absent scalar has an empty value.
pub fn scalars_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("name,value\n");
    for s in &result.scalars {
        let v = s.value.map(format_float).unwrap_or_default();
        let _ = writeln!(out, "{},{v}", s.name);
    }
    out
}

/// The resolved configuration as a config file, followed by the run
/// metadata as comments. Feeding it back reproduces the run.
pub fn manifest(cfg: &RunConfig, result: &ExperimentResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# qtraj {} run manifest", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# master_seed = {}", cfg.seed);
    for (k, v) in &cfg.entries {
        let _ = writeln!(out, "{k} = {v}");
    }
    for (k, v) in &result.metadata {
        let _ = writeln!(out, "# {k}: {v}");
    }
    out
}

fn unique_dir(root: &Path, stem: &str) -> PathBuf {
    let first = root.join(stem);
    if !first.exists() {
        return first;
    }
    (2..)
        .map(|k| root.join(format!("{stem}-{k}")))
        .find(|p| !p.exists())
        .expect("unbounded search")
}

/// Compute and write one run; returns the run directory.
pub fn execute(cfg: &RunConfig) -> Result<PathBuf, RunError> {
    let result = compute(cfg)?;
    write_run(cfg, &result)
}

/// Write the artifacts of a finished run under `cfg.out`.
pub fn write_run(cfg: &RunConfig, result: &ExperimentResult) -> Result<PathBuf, RunError> {
    let root = &cfg.out;
    fs::create_dir_all(root).map_err(io_err(root))?;
    let staging = tempfile::Builder::new()
        .prefix(".staging-")
        .tempdir_in(root)
        .map_err(io_err(root))?;
    let mut files = vec![
        ("result.csv", table_csv(&result.table)),
        ("scalars.csv", scalars_csv(result)),
        ("manifest.txt", manifest(cfg, result)),
    ];
    if let Some(scan) = &result.scan {
        files.push(("scan.csv", table_csv(scan)));
    }
    for (name, body) in files {
        let path = staging.path().join(name);
        fs::write(&path, body).map_err(io_err(&path))?;
    }
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
    let dest = unique_dir(root, &format!("{}_{stamp}", cfg.kind.name()));
    let staged = staging.keep();
    fs::rename(&staged, &dest).map_err(|e| {
        let _ = fs::remove_dir_all(&staged);
        RunError::Io {
            path: dest.clone(),
            source: e,
        }
    })?;
    Ok(dest)
}
