//! Mesh-refinement study of the solitary wave against its exact solution.

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::l2_relative_error;
use crate::error::{GnError, Result};
use crate::model::{initial_condition, InitialCondition, SolitonParams};
use crate::splitting::Scheme;

use super::config::RunConfig;
use super::execute;

/// Scheme named on the command line: `fv1`, `muscl` or `weno5`, each with
/// its dispersive order and time integrator.
pub fn scheme_by_name(name: &str) -> Result<Scheme> {
    match name.trim().to_ascii_lowercase().as_str() {
        "fv1" => Ok(Scheme::FV1),
        "muscl" => Ok(Scheme::MUSCL),
        "weno5" => Ok(Scheme::WENO5),
        other => Err(GnError::Config(format!(
            "unknown scheme `{other}` (expected fv1, muscl or weno5)"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub cells: usize,
    pub err_zeta: f64,
    pub err_v: f64,
}

/// Cell averages of the exact solitary wave of `cfg` at time `t`.
pub fn exact_soliton(cfg: &RunConfig, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let InitialCondition::Soliton { a, d2, x0 } = cfg.initial else {
        return Err(GnError::Config(
            "an exact reference exists only for the solitary wave".into(),
        ));
    };
    let s = SolitonParams { a, d2, x0 };
    let shifted = InitialCondition::Soliton {
        a,
        d2,
        x0: x0 + s.speed(cfg.g) * t,
    };
    let state = initial_condition(&shifted, &cfg.grid()?, &cfg.params())?;
    Ok((state.zeta().to_vec(), state.v().to_vec()))
}

/// Relative L2 errors at `t_end` for every scheme and mesh, ordered by
/// scheme then by ascending cell count. Runs execute in parallel.
pub fn convergence_sweep(base: &RunConfig, schemes: &[Scheme], cells: &[usize]) -> Result<Vec<SweepRow>> {
    let mut cells = cells.to_vec();
    cells.sort_unstable();
    let jobs: Vec<(Scheme, usize)> = schemes
        .iter()
        .flat_map(|&s| cells.iter().map(move |&n| (s, n)))
        .collect();
    jobs.par_iter()
        .map(|&(scheme, n)| {
            let cfg = RunConfig {
                cells: n,
                fv_order: scheme.fv_order,
                fd_order: scheme.fd_order,
                time_scheme: scheme.time_scheme,
                snapshot_times: vec![],
                output_dir: None,
                ..base.clone()
            };
            cfg.validate()?;
            let out = execute(&cfg)?;
            let (zeta, v) = exact_soliton(&cfg, cfg.t_end)?;
            let fin = out.run.snapshots.last().expect("a run always ends with a snapshot");
            Ok(SweepRow {
                scheme,
                cells: n,
                err_zeta: l2_relative_error(&fin.zeta, &zeta)?,
                err_v: l2_relative_error(&fin.v, &v)?,
            })
        })
        .collect()
}

/// CSV laid out like a convergence table: one row per mesh, a pair of
/// columns per scheme.
pub fn table_csv(rows: &[SweepRow], schemes: &[Scheme]) -> String {
    let mut cells: Vec<usize> = rows.iter().map(|r| r.cells).collect();
    cells.sort_unstable();
    cells.dedup();
    let mut out = String::from("N");
    for s in schemes {
        let tag = format!("{:?}", s.fv_order).to_lowercase();
        out.push_str(&format!(",{tag}_err_zeta,{tag}_err_v"));
    }
    out.push('\n');
    for n in cells {
        out.push_str(&n.to_string());
        for s in schemes {
            match rows.iter().find(|r| r.cells == n && r.scheme == *s) {
                Some(r) => out.push_str(&format!(",{:.6e},{:.6e}", r.err_zeta, r.err_v)),
                None => out.push_str(",,"),
            }
        }
        out.push('\n');
    }
    out
}
