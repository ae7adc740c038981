//! Finite-volume solver for the shallow-water part of the system: physical
//! flux, eigenstructure, the VFRoe interface state, the three
//! reconstructions and the explicit time steppers.

use serde::{Deserialize, Serialize};

use crate::error::{GnError, Result};
use crate::grid::{cell_source, BoundaryCondition, Parity};
use crate::model::Model;

/// Ghost cells kept on each side of the interior. The limited fifth-order
/// reconstruction at the first interface reaches three cells outside.
pub const GHOSTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedPair {
    pub zeta: f64,
    pub v: f64,
}

impl ConservedPair {
    pub fn new(zeta: f64, v: f64) -> Self {
        Self { zeta, v }
    }
}

/// Cell averages of `(zeta, v)` with `GHOSTS` ghost cells on each side.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState {
    zeta: Vec<f64>,
    v: Vec<f64>,
}

impl CellState {
    pub fn from_interior(zeta: &[f64], v: &[f64]) -> Self {
        assert_eq!(zeta.len(), v.len(), "zeta and v must have equal length");
        let pad = |x: &[f64]| {
            let mut out = vec![0.0; x.len() + 2 * GHOSTS];
            out[GHOSTS..GHOSTS + x.len()].copy_from_slice(x);
            out
        };
        Self {
            zeta: pad(zeta),
            v: pad(v),
        }
    }

    /// Motionless state `zeta = level`, `v = 0`.
    pub fn rest(cells: usize, level: f64) -> Self {
        Self::from_interior(&vec![level; cells], &vec![0.0; cells])
    }

    pub fn cells(&self) -> usize {
        self.zeta.len() - 2 * GHOSTS
    }

    pub fn zeta(&self) -> &[f64] {
        &self.zeta[GHOSTS..self.zeta.len() - GHOSTS]
    }

    pub fn v(&self) -> &[f64] {
        &self.v[GHOSTS..self.v.len() - GHOSTS]
    }

    pub fn zeta_mut(&mut self) -> &mut [f64] {
        let n = self.zeta.len();
        &mut self.zeta[GHOSTS..n - GHOSTS]
    }

    pub fn v_mut(&mut self) -> &mut [f64] {
        let n = self.v.len();
        &mut self.v[GHOSTS..n - GHOSTS]
    }

    /// Padded arrays; index `i + GHOSTS` is interior cell `i`.
    pub fn padded_zeta(&self) -> &[f64] {
        &self.zeta
    }

    pub fn padded_v(&self) -> &[f64] {
        &self.v
    }

    /// Refill the ghost cells from the interior: periodic wrap, or a mirror
    /// about the walls with `zeta` even and `v` odd.
    pub fn fill_ghosts(&mut self, bc: BoundaryCondition) {
        let n = self.cells();
        for k in (0..GHOSTS).chain(n + GHOSTS..n + 2 * GHOSTS) {
            let logical = k as isize - GHOSTS as isize;
            let (src, _) = cell_source(logical, n, bc, Parity::Even);
            let (_, sign) = cell_source(logical, n, bc, Parity::Odd);
            self.zeta[k] = self.zeta[src + GHOSTS];
            self.v[k] = sign * self.v[src + GHOSTS];
        }
    }

    pub fn is_finite(&self) -> bool {
        self.zeta().iter().chain(self.v()).all(|x| x.is_finite())
    }

    pub fn max_abs_zeta(&self) -> f64 {
        self.zeta().iter().fold(0.0, |m, z| m.max(z.abs()))
    }

    /// Sum of cell averages of `zeta` (mass divided by the cell width).
    pub fn zeta_sum(&self) -> f64 {
        self.zeta().iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FvOrder {
    Fv1,
    Muscl,
    Weno5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeScheme {
    Euler,
    Rk2,
    Rk4,
}

pub fn physical_flux(u: ConservedPair, m: &Model) -> Result<[f64; 2]> {
    let eps = m.params.epsilon;
    let n = m.nonlinearity(eps * u.zeta)?;
    Ok([
        n.f * u.v,
        0.5 * eps * n.df * u.v * u.v + m.restoring() * u.zeta,
    ])
}

pub fn jacobian(u: ConservedPair, m: &Model) -> Result<[[f64; 2]; 2]> {
    let eps = m.params.epsilon;
    let n = m.nonlinearity(eps * u.zeta)?;
    let a = eps * n.df * u.v;
    Ok([
        [a, n.f],
        [m.restoring() + 0.5 * eps * eps * n.d2f * u.v * u.v, a],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceEigen {
    pub lambda1: f64,
    pub lambda2: f64,
    pub r1: [f64; 2],
    pub r2: [f64; 2],
}

/// Eigenstructure of the Jacobian at the arithmetic mean of the two states.
/// Eigenvectors carry a unit second component.
pub fn interface_eigen(ul: ConservedPair, ur: ConservedPair, m: &Model) -> Result<InterfaceEigen> {
    let mean = ConservedPair::new(0.5 * (ul.zeta + ur.zeta), 0.5 * (ul.v + ur.v));
    let [[a, b], [c, _]] = jacobian(mean, m)?;
    let bc = b * c;
    if !(bc > 0.0) {
        return Err(GnError::HyperbolicityLoss {
            index: 0,
            zeta: mean.zeta,
            v: mean.v,
        });
    }
    let s = bc.sqrt();
    let ratio = b / s;
    Ok(InterfaceEigen {
        lambda1: a - s,
        lambda2: a + s,
        r1: [-ratio, 1.0],
        r2: [ratio, 1.0],
    })
}

/// Self-similar solution of the linearized Riemann problem along `x/t = 0`.
/// A vanishing eigenvalue is treated as nonnegative.
pub fn vfroe_interface_state(ul: ConservedPair, ur: ConservedPair, eig: &InterfaceEigen) -> ConservedPair {
    if eig.lambda1 >= 0.0 {
        return ul;
    }
    if eig.lambda2 < 0.0 {
        return ur;
    }
    let (dz, dv) = (ur.zeta - ul.zeta, ur.v - ul.v);
    let [r1, r2] = [eig.r1, eig.r2];
    let det = r1[0] * r2[1] - r2[0] * r1[1];
    let c1 = (r2[1] * dz - r2[0] * dv) / det;
    let c2 = (r1[0] * dv - r1[1] * dz) / det;
    // average of the two equivalent expressions, which keeps the solver
    // exactly equivariant under x -> -x
    ConservedPair::new(
        0.5 * ((ul.zeta + ur.zeta) + (c1 * r1[0] - c2 * r2[0])),
        0.5 * ((ul.v + ur.v) + (c1 * r1[1] - c2 * r2[1])),
    )
}

pub fn numerical_flux(ul: ConservedPair, ur: ConservedPair, m: &Model) -> Result<[f64; 2]> {
    let eig = interface_eigen(ul, ur, m)?;
    physical_flux(vfroe_interface_state(ul, ur, &eig), m)
}

/// Interface traces: `left[j]` is the value from the cell left of interface
/// `j`, `right[j]` the value from the cell on its right. Interface `j`
/// separates cells `j - 1` and `j`, so there are `N + 1` of them.
#[derive(Debug, Clone, PartialEq)]
pub struct Traces {
    pub left_zeta: Vec<f64>,
    pub left_v: Vec<f64>,
    pub right_zeta: Vec<f64>,
    pub right_v: Vec<f64>,
}

#[inline]
fn minmod(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        a.signum() * a.abs().min(b.abs())
    } else {
        0.0
    }
}

/// Limiter of the fifth-order reconstruction: the high-order increment `w`
/// is accepted up to twice the neighbouring differences `u` and `v`.
#[inline]
fn weno_limiter(u: f64, v: f64, w: f64) -> f64 {
    if u * v > 0.0 {
        u.signum() * (2.0 * u.abs()).min(2.0 * v.abs()).min(w.abs())
    } else {
        0.0
    }
}

/// High-order increment toward an interface from the four neighbouring
/// differences: `near` and `far` on the interface side, `back` on the
/// opposite side, `next` one further out.
#[inline]
fn weno_increment(near: f64, back: f64, far: f64, behind: f64) -> f64 {
    2.0 / 3.0 * near + 1.0 / 3.0 * back
        - 0.1 * (far - 2.0 * near + back)
        - 1.0 / 15.0 * (near - 2.0 * back + behind)
}

/// `(minus, plus)` reconstructed values of cell `c` of the padded array.
#[inline]
fn cell_traces(u: &[f64], c: usize, order: FvOrder) -> (f64, f64) {
    match order {
        FvOrder::Fv1 => (u[c], u[c]),
        FvOrder::Muscl => {
            let s = 0.5 * minmod(u[c + 1] - u[c], u[c] - u[c - 1]);
            (u[c] - s, u[c] + s)
        }
        FvOrder::Weno5 => {
            // d(k) = u[k] - u[k-1]
            let d = |k: usize| u[k] - u[k - 1];
            let (dm1, d0, d1, d2) = (d(c - 1), d(c), d(c + 1), d(c + 2));
            let plus = weno_increment(d1, d0, d2, dm1);
            let minus = weno_increment(d0, d1, dm1, d2);
            (
                u[c] - 0.5 * weno_limiter(d1, d0, minus),
                u[c] + 0.5 * weno_limiter(d0, d1, plus),
            )
        }
    }
}

fn reconstruct_field(u: &[f64], order: FvOrder, left: &mut [f64], right: &mut [f64]) {
    let n = u.len() - 2 * GHOSTS;
    for j in 0..=n {
        let c = j + GHOSTS;
        left[j] = cell_traces(u, c - 1, order).1;
        right[j] = cell_traces(u, c, order).0;
    }
}

/// Interface traces of a ghost-filled state.
pub fn reconstruct(state: &CellState, order: FvOrder) -> Traces {
    let m = state.cells() + 1;
    let mut t = Traces {
        left_zeta: vec![0.0; m],
        left_v: vec![0.0; m],
        right_zeta: vec![0.0; m],
        right_v: vec![0.0; m],
    };
    reconstruct_field(state.padded_zeta(), order, &mut t.left_zeta, &mut t.right_zeta);
    reconstruct_field(state.padded_v(), order, &mut t.left_v, &mut t.right_v);
    t
}

fn locate(e: GnError, index: usize) -> GnError {
    match e {
        GnError::HyperbolicityLoss { zeta, v, .. } => GnError::HyperbolicityLoss { index, zeta, v },
        e => e,
    }
}

/// Numerical fluxes at all `N + 1` interfaces of a ghost-filled state.
pub fn interface_fluxes(state: &CellState, m: &Model, order: FvOrder) -> Result<Vec<[f64; 2]>> {
    let t = reconstruct(state, order);
    (0..t.left_zeta.len())
        .map(|j| {
            let ul = ConservedPair::new(t.left_zeta[j], t.left_v[j]);
            let ur = ConservedPair::new(t.right_zeta[j], t.right_v[j]);
            numerical_flux(ul, ur, m).map_err(|e| locate(e, j))
        })
        .collect()
}

/// Semi-discrete right-hand side `-(F_{i+1/2} - F_{i-1/2}) / dx` of a
/// ghost-filled state.
pub fn hyperbolic_rhs(state: &CellState, m: &Model, order: FvOrder, dx: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let flux = interface_fluxes(state, m, order)?;
    let n = state.cells();
    let mut dz = vec![0.0; n];
    let mut dv = vec![0.0; n];
    for i in 0..n {
        dz[i] = -(flux[i + 1][0] - flux[i][0]) / dx;
        dv[i] = -(flux[i + 1][1] - flux[i][1]) / dx;
    }
    Ok((dz, dv))
}

/// Largest wave speed over all interfaces of a ghost-filled state.
pub fn max_wave_speed(state: &CellState, m: &Model) -> Result<f64> {
    let (z, v) = (state.padded_zeta(), state.padded_v());
    let mut amax: f64 = 0.0;
    for j in 0..=state.cells() {
        let c = j + GHOSTS;
        let ul = ConservedPair::new(z[c - 1], v[c - 1]);
        let ur = ConservedPair::new(z[c], v[c]);
        let e = interface_eigen(ul, ur, m).map_err(|e| locate(e, j))?;
        amax = amax.max(e.lambda1.abs()).max(e.lambda2.abs());
    }
    Ok(amax)
}

/// CFL time step `cfl * dx / max |lambda|` of a ghost-filled state.
pub fn compute_dt(state: &CellState, m: &Model, cfl: f64, dx: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(GnError::InvalidParameter(format!(
            "cfl must lie in (0, 1], got {cfl}"
        )));
    }
    let amax = max_wave_speed(state, m)?;
    if !(amax > 0.0) {
        return Err(GnError::ZeroWaveSpeed);
    }
    Ok(cfl * dx / amax)
}

/// Explicit finite-volume integrator for a fixed mesh and scheme.
#[derive(Debug, Clone)]
pub struct HyperbolicSolver {
    pub model: Model,
    pub dx: f64,
    pub bc: BoundaryCondition,
    pub order: FvOrder,
    pub time: TimeScheme,
}

impl HyperbolicSolver {
    fn rhs(&self, state: &mut CellState) -> Result<(Vec<f64>, Vec<f64>)> {
        state.fill_ghosts(self.bc);
        hyperbolic_rhs(state, &self.model, self.order, self.dx)
    }

    /// `base + h * k`, written into a fresh state.
    fn axpy(base: &CellState, h: f64, k: &(Vec<f64>, Vec<f64>)) -> CellState {
        let mut s = base.clone();
        for (x, d) in s.zeta_mut().iter_mut().zip(&k.0) {
            *x += h * d;
        }
        for (x, d) in s.v_mut().iter_mut().zip(&k.1) {
            *x += h * d;
        }
        s
    }

    /// Advance `state` by `dt`; ghosts are refilled before every stage.
    pub fn step(&self, state: &mut CellState, dt: f64) -> Result<()> {
        let k1 = self.rhs(state)?;
        match self.time {
            TimeScheme::Euler => *state = Self::axpy(state, dt, &k1),
            TimeScheme::Rk2 => {
                let mut s1 = Self::axpy(state, dt, &k1);
                let k2 = self.rhs(&mut s1)?;
                let s2 = Self::axpy(&s1, dt, &k2);
                for (x, y) in state.zeta_mut().iter_mut().zip(s2.zeta()) {
                    *x = 0.5 * (*x + y);
                }
                for (x, y) in state.v_mut().iter_mut().zip(s2.v()) {
                    *x = 0.5 * (*x + y);
                }
            }
            TimeScheme::Rk4 => {
                let mut s2 = Self::axpy(state, 0.5 * dt, &k1);
                let k2 = self.rhs(&mut s2)?;
                let mut s3 = Self::axpy(state, 0.5 * dt, &k2);
                let k3 = self.rhs(&mut s3)?;
                let mut s4 = Self::axpy(state, dt, &k3);
                let k4 = self.rhs(&mut s4)?;
                let h = dt / 6.0;
                let combine = |x: &mut [f64], a: &[f64], b: &[f64], c: &[f64], d: &[f64]| {
                    for i in 0..x.len() {
                        x[i] += h * ((a[i] + d[i]) + 2.0 * (b[i] + c[i]));
                    }
                };
                combine(state.zeta_mut(), &k1.0, &k2.0, &k3.0, &k4.0);
                combine(state.v_mut(), &k1.1, &k2.1, &k3.1, &k4.1);
            }
        }
        state.fill_ghosts(self.bc);
        Ok(())
    }
}

/// One hyperbolic step returning the new state.
pub fn hyperbolic_step(
    state: &CellState,
    dt: f64,
    dx: f64,
    model: &Model,
    order: FvOrder,
    time: TimeScheme,
    bc: BoundaryCondition,
) -> Result<CellState> {
    let solver = HyperbolicSolver {
        model: *model,
        dx,
        bc,
        order,
        time,
    };
    let mut s = state.clone();
    solver.step(&mut s, dt)?;
    Ok(s)
}
