//! Configuration, scenario registry, output writers and the sweep harness
//! behind the `gnwave` binary.

pub mod commands;
pub mod config;
pub mod output;
pub mod scenario;
pub mod sweep;

use std::path::Path;

use serde::Serialize;

use crate::error::{GnError, Result};
use crate::model::{initial_condition, InitialCondition, Model};
use crate::splitting::{run, RunOutput, Simulation};

use config::RunConfig;
use output::{emit_snapshots, Manifest, ManifestSnapshot, ReferenceError};

/// A finished run together with the model it used.
#[derive(Debug, Clone)]
pub struct Execution {
    pub model: Model,
    pub run: RunOutput,
}

/// Build the solver described by `cfg` and integrate it.
pub fn execute(cfg: &RunConfig) -> Result<Execution> {
    cfg.validate()?;
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let sim = Simulation::new(grid, cfg.bc, model, cfg.scheme(), cfg.dispersion, cfg.cfl)?;
    let initial = initial_condition(&cfg.initial, &grid, &model.params)?;
    let run = run(&sim, initial, &cfg.control())?;
    Ok(Execution { model, run })
}

/// Errors against the exact solitary wave at each snapshot, when one exists.
pub fn reference_errors(cfg: &RunConfig, out: &RunOutput) -> Result<Option<Vec<ReferenceError>>> {
    if !matches!(cfg.initial, InitialCondition::Soliton { .. }) || cfg.gamma != 0.0 || cfg.delta != 1.0 {
        return Ok(None);
    }
    out.snapshots
        .iter()
        .map(|s| {
            let (z, v) = sweep::exact_soliton(cfg, s.t)?;
            Ok(ReferenceError {
                t: s.t,
                zeta: crate::analysis::l2_relative_error(&s.zeta, &z)?,
                v: crate::analysis::l2_relative_error(&s.v, &v)?,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Run `cfg` and write its snapshots and manifest into `dir`.
pub fn run_to_dir(cfg: &RunConfig, dir: &Path) -> Result<Execution> {
    let exec = execute(cfg)?;
    let refs = reference_errors(cfg, &exec.run)?;
    let manifest = Manifest {
        status: "ok",
        config: cfg,
        alpha_resolved: exec.model.coeffs.alpha_disp,
        snapshots: exec
            .run
            .snapshots
            .iter()
            .enumerate()
            .map(|(i, s)| ManifestSnapshot {
                t: s.t,
                file: output::snapshot_file_name(i),
            })
            .collect(),
        diagnostics: &exec.run.history,
        max_mass_drift: exec.run.max_mass_drift,
        reference_errors: refs,
    };
    emit_snapshots(dir, &exec.run.snapshots, &manifest)?;
    Ok(exec)
}

/// Machine-readable description of a failed run.
#[derive(Debug, Clone, Serialize)]
pub struct FailureReport {
    pub status: &'static str,
    pub scenario: String,
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<[f64; 2]>,
}

impl FailureReport {
    pub fn new(scenario: &str, e: &GnError) -> Self {
        let mut r = FailureReport {
            status: "numerical_failure",
            scenario: scenario.to_string(),
            error: e.to_string(),
            t: None,
            cell: None,
            state: None,
        };
        let mut cur = e;
        loop {
            match cur {
                GnError::AtTime { t, source } => {
                    r.t = Some(*t);
                    cur = source;
                }
                GnError::Instability { t, .. } | GnError::NonFinite { t } => {
                    r.t = Some(*t);
                    break;
                }
                GnError::HyperbolicityLoss { index, zeta, v } => {
                    r.cell = Some(*index);
                    r.state = Some([*zeta, *v]);
                    break;
                }
                _ => break,
            }
        }
        r
    }
}
