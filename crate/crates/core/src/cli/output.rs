//! Snapshot CSV files and the `run.json` manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{GnError, Result};
use crate::splitting::{Snapshot, StepRecord};

use super::config::RunConfig;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> GnError + '_ {
    move |source| GnError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn snapshot_file_name(index: usize) -> String {
    format!("snapshot_{index:04}.csv")
}

/// CSV text of one snapshot: `#` header lines, then `x,zeta,v` rows with
/// 17 significant digits.
pub fn snapshot_csv(s: &Snapshot, cfg: &RunConfig, alpha: f64) -> String {
    let mut out = String::with_capacity(64 * (s.x.len() + 8));
    out.push_str(&format!("# scenario = {}\n", cfg.scenario));
    out.push_str(&format!("# t = {:.16e}\n", s.t));
    out.push_str(&format!(
        "# gamma = {}, delta = {}, mu = {}, epsilon = {}, bo_inv = {}, g = {}, alpha = {}\n",
        cfg.gamma, cfg.delta, cfg.mu, cfg.epsilon, cfg.bo_inv, cfg.g, alpha
    ));
    out.push_str(&format!(
        "# scheme = {}, bc = {:?}, cells = {}, dispersion = {:?}\n",
        cfg.scheme().name(),
        cfg.bc,
        cfg.cells,
        cfg.dispersion
    ));
    out.push_str(&format!(
        "# mass = {:.16e}, max_abs_zeta = {:.16e}, dt = {:.16e}\n",
        s.mass, s.max_abs_zeta, s.dt
    ));
    out.push_str("x,zeta,v\n");
    for i in 0..s.x.len() {
        out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", s.x[i], s.zeta[i], s.v[i]));
    }
    out
}

/// `(t, x, zeta, v)` read back from a snapshot CSV.
pub type SnapshotColumns = (f64, Vec<f64>, Vec<f64>, Vec<f64>);

pub fn parse_snapshot_csv(text: &str) -> Result<SnapshotColumns> {
    let mut t = f64::NAN;
    let (mut x, mut z, mut v) = (Vec::new(), Vec::new(), Vec::new());
    for (n, line) in text.lines().enumerate() {
        if let Some(h) = line.strip_prefix('#') {
            if let Some(val) = h.trim().strip_prefix("t = ") {
                t = val.trim().parse().map_err(|_| bad_line(n, line))?;
            }
            continue;
        }
        if line.starts_with("x,") || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad_line(n, line))?;
        if cols.len() != 3 {
            return Err(bad_line(n, line));
        }
        x.push(cols[0]);
        z.push(cols[1]);
        v.push(cols[2]);
    }
    Ok((t, x, z, v))
}

fn bad_line(n: usize, line: &str) -> GnError {
    GnError::Config(format!("malformed snapshot line {}: {line:?}", n + 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub status: &'a str,
    pub config: &'a RunConfig,
    pub alpha_resolved: f64,
    pub snapshots: Vec<ManifestSnapshot>,
    pub diagnostics: &'a [StepRecord],
    pub max_mass_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_errors: Option<Vec<ReferenceError>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestSnapshot {
    pub t: f64,
    pub file: String,
}

/// Relative L2 errors against an exact solution at a snapshot time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceError {
    pub t: f64,
    pub zeta: f64,
    pub v: f64,
}

/// Write one CSV per snapshot into `dir`, then `run.json`. The manifest is
/// written last and marks a complete output directory.
pub fn emit_snapshots(dir: &Path, snapshots: &[Snapshot], manifest: &Manifest<'_>) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut written = Vec::with_capacity(snapshots.len() + 1);
    for (i, s) in snapshots.iter().enumerate() {
        let path = dir.join(snapshot_file_name(i));
        fs::write(&path, snapshot_csv(s, manifest.config, manifest.alpha_resolved))
            .map_err(io_err(&path))?;
        written.push(path);
    }
    let path = dir.join("run.json");
    write_json(&path, manifest)?;
    written.push(path);
    Ok(written)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    serde_json::to_writer_pretty(&mut f, value)
        .map_err(|e| GnError::Io {
            path: path.to_path_buf(),
            source: e.into(),
        })?;
    f.write_all(b"\n").map_err(io_err(path))
}
