//! Strang composition of the hyperbolic and dispersive half-solvers, the
//! cell/node transfers, and the time loop.

use serde::{Deserialize, Serialize};

use crate::dispersive::{DispersiveSolver, DispersiveTerms, FdOrder, NodalState};
use crate::error::{GnError, Result};
use crate::grid::{pad_nodes, BoundaryCondition, Grid, Parity};
use crate::hyperbolic::{compute_dt, CellState, FvOrder, HyperbolicSolver, TimeScheme, GHOSTS};
use crate::model::Model;

/// Node `j` value from the six surrounding cell averages: the mean of the
/// two fifth-order traces meeting at the node. `a[k]` is cell `j - 1 - k`,
/// `b[k]` cell `j + k`.
#[inline]
fn node_from_cells(a: [f64; 3], b: [f64; 3]) -> f64 {
    0.5 * (a[0] + b[0])
        + (-8.0 * ((a[1] - a[0]) + (b[1] - b[0])) + ((a[2] - a[0]) + (b[2] - b[0]))) / 60.0
}

/// Cell `i` average from the six surrounding nodes. `a[k]` is node `i - k`,
/// `b[k]` node `i + 1 + k`.
#[inline]
fn cell_from_nodes(a: [f64; 3], b: [f64; 3]) -> f64 {
    0.5 * (a[0] + b[0])
        + (-93.0 * ((a[1] - a[0]) + (b[1] - b[0])) + 11.0 * ((a[2] - a[0]) + (b[2] - b[0]))) / 1440.0
}

fn cells_to_nodes(padded: &[f64], nodes: usize) -> Vec<f64> {
    (0..nodes)
        .map(|j| {
            let c = j + GHOSTS;
            node_from_cells(
                [padded[c - 1], padded[c - 2], padded[c - 3]],
                [padded[c], padded[c + 1], padded[c + 2]],
            )
        })
        .collect()
}

fn nodes_to_cells(nodal: &[f64], cells: usize, bc: BoundaryCondition, parity: Parity) -> Vec<f64> {
    let u = pad_nodes(nodal, bc, parity, 3);
    (0..cells)
        .map(|i| {
            let c = i + 3;
            cell_from_nodes([u[c], u[c - 1], u[c - 2]], [u[c + 1], u[c + 2], u[c + 3]])
        })
        .collect()
}

/// Point values at the nodes from ghost-filled cell averages.
pub fn cell_to_nodal(cell: &CellState, bc: BoundaryCondition) -> NodalState {
    let nodes = match bc {
        BoundaryCondition::Periodic => cell.cells(),
        BoundaryCondition::Reflective => cell.cells() + 1,
    };
    NodalState {
        zeta: cells_to_nodes(cell.padded_zeta(), nodes),
        v: cells_to_nodes(cell.padded_v(), nodes),
    }
}

/// Cell averages from nodal values.
pub fn nodal_to_cell(nodal: &NodalState, cells: usize, bc: BoundaryCondition) -> CellState {
    CellState::from_interior(
        &nodes_to_cells(&nodal.zeta, cells, bc, Parity::Even),
        &nodes_to_cells(&nodal.v, cells, bc, Parity::Odd),
    )
}

/// A discretization triple. The admissible combinations are
/// FV1-DF2-Euler, FV1-DF2-RK2, MUSCL-DF2-RK2 and WENO5-DF4-RK4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scheme {
    pub fv_order: FvOrder,
    pub fd_order: FdOrder,
    pub time_scheme: TimeScheme,
}

impl Scheme {
    pub const FV1: Scheme = Scheme {
        fv_order: FvOrder::Fv1,
        fd_order: FdOrder::Df2,
        time_scheme: TimeScheme::Euler,
    };
    pub const MUSCL: Scheme = Scheme {
        fv_order: FvOrder::Muscl,
        fd_order: FdOrder::Df2,
        time_scheme: TimeScheme::Rk2,
    };
    pub const WENO5: Scheme = Scheme {
        fv_order: FvOrder::Weno5,
        fd_order: FdOrder::Df4,
        time_scheme: TimeScheme::Rk4,
    };

    pub fn validate(&self) -> Result<()> {
        use {FdOrder::*, FvOrder::*, TimeScheme::*};
        match (self.fv_order, self.fd_order, self.time_scheme) {
            (Fv1, Df2, Euler | Rk2) | (Muscl, Df2, Rk2) | (Weno5, Df4, Rk4) => Ok(()),
            (f, d, t) => Err(GnError::Config(format!(
                "unsupported scheme combination {f:?}-{d:?}-{t:?}; use fv1-df2-euler, \
                 fv1-df2-rk2, muscl-df2-rk2 or weno5-df4-rk4"
            ))),
        }
    }

    /// Runge-Kutta scheme of the dispersive half: RK2 with DF2, RK4 with DF4.
    pub fn dispersive_time(&self) -> TimeScheme {
        match self.fd_order {
            FdOrder::Df2 => TimeScheme::Rk2,
            FdOrder::Df4 => TimeScheme::Rk4,
        }
    }

    pub fn name(&self) -> String {
        format!("{:?}-{:?}-{:?}", self.fv_order, self.fd_order, self.time_scheme).to_uppercase()
    }
}

/// Whether and how the dispersive half-step is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dispersion {
    Safe,
    Naive,
    Off,
}

/// A fully assembled solver for one mesh, model and scheme.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub grid: Grid,
    pub bc: BoundaryCondition,
    pub model: Model,
    pub scheme: Scheme,
    pub cfl: f64,
    hyperbolic: HyperbolicSolver,
    dispersive: Option<DispersiveSolver>,
}

impl Simulation {
    pub fn new(
        grid: Grid,
        bc: BoundaryCondition,
        model: Model,
        scheme: Scheme,
        dispersion: Dispersion,
        cfl: f64,
    ) -> Result<Self> {
        scheme.validate()?;
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(GnError::InvalidParameter(format!(
                "cfl must lie in (0, 1], got {cfl}"
            )));
        }
        let terms = match dispersion {
            Dispersion::Safe => Some(DispersiveTerms::Safe),
            Dispersion::Naive => Some(DispersiveTerms::Naive),
            Dispersion::Off => None,
        };
        let dispersive = terms
            .map(|t| {
                DispersiveSolver::new(&grid, &model, scheme.fd_order, bc, t, scheme.dispersive_time())
            })
            .transpose()?;
        Ok(Self {
            grid,
            bc,
            model,
            scheme,
            cfl,
            hyperbolic: HyperbolicSolver {
                model,
                dx: grid.dx(),
                bc,
                order: scheme.fv_order,
                time: scheme.time_scheme,
            },
            dispersive,
        })
    }

    pub fn dispersive_solver(&self) -> Option<&DispersiveSolver> {
        self.dispersive.as_ref()
    }

    pub fn stable_dt(&self, state: &mut CellState) -> Result<f64> {
        state.fill_ghosts(self.bc);
        compute_dt(state, &self.model, self.cfl, self.grid.dx())
    }

    /// One step of `S1(dt/2) S2(dt) S1(dt/2)`. The dispersive half moves
    /// only `v`; its nodal increment is transferred back to the cells.
    pub fn strang_step(&self, state: &mut CellState, dt: f64) -> Result<()> {
        self.hyperbolic.step(state, 0.5 * dt)?;
        if let Some(disp) = &self.dispersive {
            let mut nodal = cell_to_nodal(state, self.bc);
            let before = nodal.v.clone();
            disp.step(&mut nodal, dt)?;
            let increment: Vec<f64> = nodal.v.iter().zip(&before).map(|(a, b)| a - b).collect();
            let dv = nodes_to_cells(&increment, state.cells(), self.bc, Parity::Odd);
            for (v, d) in state.v_mut().iter_mut().zip(dv) {
                *v += d;
            }
        }
        self.hyperbolic.step(state, 0.5 * dt)
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    pub max_abs_zeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub zeta: Vec<f64>,
    pub v: Vec<f64>,
    pub mass: f64,
    pub max_abs_zeta: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub snapshots: Vec<Snapshot>,
    pub history: Vec<StepRecord>,
    pub final_state: CellState,
    pub max_mass_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunControl {
    pub t_end: f64,
    /// Output times in `[0, t_end]`; `t_end` is always added.
    pub snapshot_times: Vec<f64>,
    /// Abort once `max |zeta|` exceeds this multiple of its initial value.
    pub instability_factor: f64,
}

/// Time integration tracking `t`, with the final step clipped so targets
/// are reached exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationClock {
    pub t: f64,
    pub t_end: f64,
    pub dt_last: f64,
}

impl SimulationClock {
    /// Step toward `target`, returning the step actually taken.
    fn advance(&mut self, dt: f64, target: f64) -> f64 {
        let step = if self.t + dt >= target || target - (self.t + dt) < 1e-12 * dt {
            target - self.t
        } else {
            dt
        };
        self.t = if step == target - self.t { target } else { self.t + step };
        self.dt_last = step;
        step
    }
}

fn snapshot(sim: &Simulation, state: &CellState, t: f64, dt: f64) -> Snapshot {
    Snapshot {
        t,
        x: sim.grid.cell_centers(),
        zeta: state.zeta().to_vec(),
        v: state.v().to_vec(),
        mass: state.zeta_sum() * sim.grid.dx(),
        max_abs_zeta: state.max_abs_zeta(),
        dt,
    }
}

/// Integrate `initial` to `control.t_end`, recording snapshots.
pub fn run(sim: &Simulation, initial: CellState, control: &RunControl) -> Result<RunOutput> {
    let t_end = control.t_end;
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(GnError::InvalidParameter(format!("t_end must be >= 0, got {t_end}")));
    }
    let mut targets: Vec<f64> = control.snapshot_times.clone();
    if targets.iter().any(|&t| !(0.0..=t_end).contains(&t)) {
        return Err(GnError::InvalidParameter(
            "snapshot times must lie in [0, t_end]".into(),
        ));
    }
    targets.push(t_end);
    targets.sort_by(f64::total_cmp);
    targets.dedup();

    let mut state = initial;
    state.fill_ghosts(sim.bc);
    if !state.is_finite() {
        return Err(GnError::NonFinite { t: 0.0 });
    }
    let dx = sim.grid.dx();
    let mass0 = state.zeta_sum() * dx;
    let mass_scale = mass0
        .abs()
        .max(state.zeta().iter().map(|z| z.abs()).sum::<f64>() * dx);
    let limit = control.instability_factor * state.max_abs_zeta().max(f64::MIN_POSITIVE);

    let mut clock = SimulationClock {
        t: 0.0,
        t_end,
        dt_last: 0.0,
    };
    let mut snapshots = Vec::new();
    let mut history = Vec::new();
    let mut max_drift: f64 = 0.0;
    for &target in &targets {
        while clock.t < target {
            let dt = sim.stable_dt(&mut state).map_err(|e| e.at_time(clock.t))?;
            let t0 = clock.t;
            let step = clock.advance(dt, target);
            sim.strang_step(&mut state, step).map_err(|e| e.at_time(t0))?;
            if !state.is_finite() {
                return Err(GnError::NonFinite { t: clock.t });
            }
            let max_abs = state.max_abs_zeta();
            if max_abs > limit {
                return Err(GnError::Instability {
                    t: clock.t,
                    max_abs_zeta: max_abs,
                    limit,
                });
            }
            let mass = state.zeta_sum() * dx;
            if mass_scale > 0.0 {
                max_drift = max_drift.max((mass - mass0).abs() / mass_scale);
            }
            history.push(StepRecord {
                t: clock.t,
                dt: step,
                mass,
                max_abs_zeta: max_abs,
            });
        }
        snapshots.push(snapshot(sim, &state, clock.t, clock.dt_last));
    }
    Ok(RunOutput {
        snapshots,
        history,
        final_state: state,
        max_mass_drift: max_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PhysicalParams;

    #[test]
    fn transfers_are_exact_on_constants() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Reflective] {
            let mut s = CellState::from_interior(&[0.3; 16], &[0.0; 16]);
            s.fill_ghosts(bc);
            let n = cell_to_nodal(&s, bc);
            assert!(n.zeta.iter().all(|&z| z == 0.3));
            assert!(n.v.iter().all(|&v| v == 0.0));
            let back = nodal_to_cell(&n, 16, bc);
            assert_eq!(back.zeta(), s.zeta());
        }
    }

    #[test]
    fn transfer_weights_reproduce_their_moments() {
        // point value from cell averages of x^m, nodes at 0, cells centred
        // at +-1/2, +-3/2, +-5/2 (unit spacing)
        let avg = |c: f64, m: i32| {
            (((c + 0.5).powi(m + 1)) - ((c - 0.5).powi(m + 1))) / (m + 1) as f64
        };
        for m in 0..6 {
            let a = [avg(-0.5, m), avg(-1.5, m), avg(-2.5, m)];
            let b = [avg(0.5, m), avg(1.5, m), avg(2.5, m)];
            let want = if m == 0 { 1.0 } else { 0.0 };
            assert!((node_from_cells(a, b) - want).abs() < 1e-13, "m = {m}");
            // cell [0,1] average from nodes at -2..3
            let p = |x: f64| x.powi(m);
            let got = cell_from_nodes([p(0.0), p(-1.0), p(-2.0)], [p(1.0), p(2.0), p(3.0)]);
            assert!((got - 1.0 / (m + 1) as f64).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn scheme_pairings() {
        assert!(Scheme::FV1.validate().is_ok());
        assert!(Scheme::MUSCL.validate().is_ok());
        assert!(Scheme::WENO5.validate().is_ok());
        let bad = Scheme {
            fd_order: FdOrder::Df4,
            ..Scheme::FV1
        };
        assert!(matches!(bad.validate(), Err(GnError::Config(_))));
        assert_eq!(Scheme::WENO5.name(), "WENO5-DF4-RK4");
    }

    #[test]
    fn clock_hits_targets_exactly() {
        let mut c = SimulationClock {
            t: 0.0,
            t_end: 1.0,
            dt_last: 0.0,
        };
        let mut n = 0;
        while c.t < 1.0 {
            c.advance(0.3, 1.0);
            n += 1;
        }
        assert_eq!(c.t, 1.0);
        assert_eq!(n, 4);
        assert!((c.dt_last - 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_duration_run_returns_initial_state() {
        let g = Grid::new(0.0, 10.0, 20).unwrap();
        let m = Model::new(PhysicalParams::one_layer_dimensional(9.81), 1.0).unwrap();
        let sim = Simulation::new(g, BoundaryCondition::Periodic, m, Scheme::MUSCL, Dispersion::Safe, 1.0)
            .unwrap();
        let s0 = CellState::rest(20, 0.1);
        let out = run(
            &sim,
            s0.clone(),
            &RunControl {
                t_end: 0.0,
                snapshot_times: vec![0.0],
                instability_factor: 5.0,
            },
        )
        .unwrap();
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.snapshots[0].zeta, s0.zeta());
        assert!(out.history.is_empty());
    }
}
