//! Finite-difference treatment of the dispersive subsystem at frozen `zeta`:
//! centred stencils, the constant-coefficient elliptic operator
//! `I - mu nu alpha D2`, the Q-terms and explicit Runge-Kutta stepping.

use serde::{Deserialize, Serialize};

use crate::banded::{BandLu, BandMatrix, CyclicLu};
use crate::error::{GnError, Result};
use crate::grid::{node_source, pad_nodes, BoundaryCondition, Grid, Parity};
use crate::hyperbolic::TimeScheme;
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FdOrder {
    Df2,
    Df4,
}

impl FdOrder {
    /// Half-width of the stencils.
    pub fn reach(self) -> usize {
        match self {
            FdOrder::Df2 => 1,
            FdOrder::Df4 => 2,
        }
    }

    /// Second-derivative weights at offsets `-p..=p`, before division by dx².
    pub fn d2_weights(self) -> Vec<f64> {
        match self {
            FdOrder::Df2 => vec![1.0, -2.0, 1.0],
            FdOrder::Df4 => [-1.0, 16.0, -30.0, 16.0, -1.0]
                .iter()
                .map(|w| w / 12.0)
                .collect(),
        }
    }

    /// First-derivative weights at offsets `-p..=p`, before division by dx.
    pub fn d1_weights(self) -> Vec<f64> {
        match self {
            FdOrder::Df2 => vec![-0.5, 0.0, 0.5],
            FdOrder::Df4 => [1.0, -8.0, 0.0, 8.0, -1.0]
                .iter()
                .map(|w| w / 12.0)
                .collect(),
        }
    }
}

/// Which form of the `zeta`-dependent dispersive terms is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersiveTerms {
    /// Q2, Q3 built on the regularized gradient `(I - mu nu alpha D2)^{-1}`.
    Safe,
    /// Q2, Q3 built on the raw gradient; unstable at high frequency.
    Naive,
}

/// Nodal values of `(zeta, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalState {
    pub zeta: Vec<f64>,
    pub v: Vec<f64>,
}

/// Centred first and second differences on the node set of one boundary
/// condition. Reflective walls mirror fields according to their parity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdStencils {
    pub order: FdOrder,
    pub bc: BoundaryCondition,
    pub dx: f64,
}

impl FdStencils {
    pub fn new(order: FdOrder, bc: BoundaryCondition, dx: f64) -> Self {
        Self { order, bc, dx }
    }

    /// First derivative; the result has the opposite parity of `field`.
    pub fn apply_d1(&self, field: &[f64], parity: Parity) -> Vec<f64> {
        let p = self.order.reach();
        let u = pad_nodes(field, self.bc, parity, p);
        let dx = self.dx;
        (0..field.len())
            .map(|i| {
                let c = i + p;
                match self.order {
                    FdOrder::Df2 => (u[c + 1] - u[c - 1]) / (2.0 * dx),
                    FdOrder::Df4 => {
                        (8.0 * (u[c + 1] - u[c - 1]) - (u[c + 2] - u[c - 2])) / (12.0 * dx)
                    }
                }
            })
            .collect()
    }

    /// Second derivative; parity is preserved.
    pub fn apply_d2(&self, field: &[f64], parity: Parity) -> Vec<f64> {
        let p = self.order.reach();
        let u = pad_nodes(field, self.bc, parity, p);
        let h2 = self.dx * self.dx;
        (0..field.len())
            .map(|i| {
                let c = i + p;
                let near = (u[c + 1] - u[c]) + (u[c - 1] - u[c]);
                match self.order {
                    FdOrder::Df2 => near / h2,
                    FdOrder::Df4 => {
                        let far = (u[c + 2] - u[c]) + (u[c - 2] - u[c]);
                        (16.0 * near - far) / (12.0 * h2)
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Factor {
    Band(BandLu),
    Cyclic(CyclicLu),
}

/// Factorized `I - c D2` with `c = mu nu alpha`, acting on odd nodal fields
/// (every field it inverts is a derivative of an even one or a velocity).
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticOperator {
    pub order: FdOrder,
    pub bc: BoundaryCondition,
    pub coefficient: f64,
    pub dx: f64,
    nodes: usize,
    factor: Factor,
}

/// Builds and factors `I - mu nu alpha D2` on the node set of `grid`.
pub fn assemble_elliptic(
    grid: &Grid,
    model: &Model,
    order: FdOrder,
    bc: BoundaryCondition,
) -> Result<EllipticOperator> {
    let coefficient = model.params.mu * model.coeffs.nu * model.coeffs.alpha_disp;
    EllipticOperator::new(grid.node_count(bc), grid.dx(), coefficient, order, bc)
}

impl EllipticOperator {
    pub fn new(nodes: usize, dx: f64, coefficient: f64, order: FdOrder, bc: BoundaryCondition) -> Result<Self> {
        if !(coefficient > 0.0) || !(dx > 0.0) {
            return Err(GnError::InvalidParameter(format!(
                "elliptic operator needs positive coefficient and spacing, got {coefficient}, {dx}"
            )));
        }
        let stencil = Self::stencil_for(order, coefficient, dx);
        let p = order.reach();
        let singular = || GnError::InvalidParameter("singular elliptic operator".into());
        let factor = match bc {
            BoundaryCondition::Periodic => {
                Factor::Cyclic(CyclicLu::from_stencil(nodes, &stencil).ok_or_else(singular)?)
            }
            BoundaryCondition::Reflective => {
                let mut m = BandMatrix::zeros(nodes, p);
                for i in 0..nodes {
                    for (k, &w) in stencil.iter().enumerate() {
                        let j = i as isize + k as isize - p as isize;
                        let (src, sign) = node_source(j, nodes, bc, Parity::Odd);
                        m.add(i, src, sign * w);
                    }
                }
                Factor::Band(m.factorize().ok_or_else(singular)?)
            }
        };
        Ok(Self {
            order,
            bc,
            coefficient,
            dx,
            nodes,
            factor,
        })
    }

    fn stencil_for(order: FdOrder, coefficient: f64, dx: f64) -> Vec<f64> {
        let p = order.reach();
        let scale = coefficient / (dx * dx);
        order
            .d2_weights()
            .iter()
            .enumerate()
            .map(|(k, w)| if k == p { 1.0 - scale * w } else { -scale * w })
            .collect()
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// `(I - c D2) x` for an odd field.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let st = FdStencils::new(self.order, self.bc, self.dx);
        let d2 = st.apply_d2(x, Parity::Odd);
        x.iter().zip(d2).map(|(a, b)| a - self.coefficient * b).collect()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        assert_eq!(x.len(), self.nodes, "right-hand side has the wrong length");
        match &self.factor {
            Factor::Band(lu) => lu.solve_in_place(x),
            Factor::Cyclic(lu) => lu.solve_in_place(x),
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Dispersive source terms `(Q1, Q2, Q3)` of the regularized form. One
/// elliptic solve of the hydrostatic gradient is shared by Q2 and Q3.
pub fn q_terms(
    zeta: &[f64],
    v: &[f64],
    model: &Model,
    st: &FdStencils,
    op: &EllipticOperator,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let c = &model.coeffs;
    let d1v = st.apply_d1(v, Parity::Odd);
    let d2v = st.apply_d2(v, Parity::Odd);
    let q1 = d1v
        .iter()
        .zip(&d2v)
        .map(|(a, b)| 2.0 * c.kappa * a * b)
        .collect();
    let w = op.solve(&hydrostatic_gradient(zeta, model, st));
    let (q2, q3) = zeta_terms(zeta, &w, model, st);
    (q1, q2, q3)
}

/// Q2 and Q3 built on the unregularized hydrostatic gradient.
pub fn q_terms_naive(zeta: &[f64], model: &Model, st: &FdStencils) -> (Vec<f64>, Vec<f64>) {
    zeta_terms(zeta, &hydrostatic_gradient(zeta, model, st), model, st)
}

/// `g (gamma + delta) D1 zeta`.
fn hydrostatic_gradient(zeta: &[f64], model: &Model, st: &FdStencils) -> Vec<f64> {
    let r = model.restoring();
    st.apply_d1(zeta, Parity::Even)
        .into_iter()
        .map(|d| r * d)
        .collect()
}

/// `kappa2 D1[zeta D1 w]` and `-kappa1 zeta D2 w` for an odd field `w`.
fn zeta_terms(zeta: &[f64], w: &[f64], model: &Model, st: &FdStencils) -> (Vec<f64>, Vec<f64>) {
    let c = &model.coeffs;
    let inner: Vec<f64> = zeta
        .iter()
        .zip(st.apply_d1(w, Parity::Odd))
        .map(|(z, d)| z * d)
        .collect();
    let q2 = st
        .apply_d1(&inner, Parity::Even)
        .into_iter()
        .map(|d| c.kappa2 * d)
        .collect();
    let q3 = zeta
        .iter()
        .zip(st.apply_d2(w, Parity::Odd))
        .map(|(z, d)| -c.kappa1 * z * d)
        .collect();
    (q2, q3)
}

/// The `zeta`-dependent pieces of the dispersive right-hand side, computed
/// once per dispersive step since `zeta` is frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenZeta {
    dzeta: Vec<f64>,
    gradient: Vec<f64>,
    q3: Vec<f64>,
    dq3: Vec<f64>,
    /// `mu eps nu (Q2 + Q3)`.
    source: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct DispersiveSolver {
    pub model: Model,
    pub stencils: FdStencils,
    pub op: EllipticOperator,
    pub terms: DispersiveTerms,
    pub time: TimeScheme,
}

impl DispersiveSolver {
    pub fn new(
        grid: &Grid,
        model: &Model,
        order: FdOrder,
        bc: BoundaryCondition,
        terms: DispersiveTerms,
        time: TimeScheme,
    ) -> Result<Self> {
        if time == TimeScheme::Euler {
            return Err(GnError::InvalidParameter(
                "the dispersive step supports rk2 and rk4 only".into(),
            ));
        }
        Ok(Self {
            model: *model,
            stencils: FdStencils::new(order, bc, grid.dx()),
            op: assemble_elliptic(grid, model, order, bc)?,
            terms,
            time,
        })
    }

    pub fn freeze(&self, zeta: &[f64]) -> Result<FrozenZeta> {
        let (st, m) = (&self.stencils, &self.model);
        let p = &m.params;
        let dzeta = st.apply_d1(zeta, Parity::Even);
        let r = m.restoring();
        let gradient: Vec<f64> = dzeta.iter().map(|d| r * d).collect();
        let mut q3 = Vec::with_capacity(zeta.len());
        let mut dq3 = Vec::with_capacity(zeta.len());
        for &z in zeta {
            let n = m.nonlinearity(p.epsilon * z)?;
            q3.push(n.q3);
            dq3.push(n.dq3);
        }
        let (q2, q3t) = match self.terms {
            DispersiveTerms::Safe => zeta_terms(zeta, &self.op.solve(&gradient), m, st),
            DispersiveTerms::Naive => zeta_terms(zeta, &gradient, m, st),
        };
        let scale = p.mu * p.epsilon * m.coeffs.nu;
        let source = q2.iter().zip(&q3t).map(|(a, b)| scale * (a + b)).collect();
        Ok(FrozenZeta {
            dzeta,
            gradient,
            q3,
            dq3,
            source,
        })
    }

    /// `dv/dt = B - (I - mu nu alpha D2)^{-1} [B + mu eps Q1 + mu eps nu (Q2 + Q3)]`.
    pub fn rhs(&self, fz: &FrozenZeta, v: &[f64]) -> Vec<f64> {
        let st = &self.stencils;
        let p = &self.model.params;
        let c = &self.model.coeffs;
        let eps = p.epsilon;
        let d1v = st.apply_d1(v, Parity::Odd);
        let d2v = st.apply_d2(v, Parity::Odd);
        let inv_alpha = 1.0 / c.alpha_disp;
        let b: Vec<f64> = (0..v.len())
            .map(|i| {
                inv_alpha
                    * (fz.gradient[i]
                        + 2.0 * eps * fz.q3[i] * v[i] * d1v[i]
                        + eps * eps * fz.dq3[i] * fz.dzeta[i] * v[i] * v[i])
            })
            .collect();
        let me = p.mu * eps;
        let mut inner: Vec<f64> = (0..v.len())
            .map(|i| b[i] + me * 2.0 * c.kappa * d1v[i] * d2v[i] + fz.source[i])
            .collect();
        self.op.solve_in_place(&mut inner);
        b.iter().zip(inner).map(|(x, y)| x - y).collect()
    }

    /// Advance `v` by `dt`; `zeta` is left untouched.
    pub fn step(&self, state: &mut NodalState, dt: f64) -> Result<()> {
        let fz = self.freeze(&state.zeta)?;
        let v = &state.v;
        let shifted = |base: &[f64], h: f64, k: &[f64]| -> Vec<f64> {
            base.iter().zip(k).map(|(x, d)| x + h * d).collect()
        };
        let next = match self.time {
            TimeScheme::Rk2 => {
                let k1 = self.rhs(&fz, v);
                let v1 = shifted(v, dt, &k1);
                let k2 = self.rhs(&fz, &v1);
                let v2 = shifted(&v1, dt, &k2);
                v.iter().zip(v2).map(|(a, b)| 0.5 * (a + b)).collect()
            }
            _ => {
                let k1 = self.rhs(&fz, v);
                let k2 = self.rhs(&fz, &shifted(v, 0.5 * dt, &k1));
                let k3 = self.rhs(&fz, &shifted(v, 0.5 * dt, &k2));
                let k4 = self.rhs(&fz, &shifted(v, dt, &k3));
                let h = dt / 6.0;
                (0..v.len())
                    .map(|i| v[i] + h * ((k1[i] + k4[i]) + 2.0 * (k2[i] + k3[i])))
                    .collect()
            }
        };
        state.v = next;
        Ok(())
    }
}

/// Dispersive acceleration of a nodal state.
pub fn dispersive_rhs(
    zeta: &[f64],
    v: &[f64],
    solver: &DispersiveSolver,
) -> Result<Vec<f64>> {
    Ok(solver.rhs(&solver.freeze(zeta)?, v))
}

/// One dispersive step returning the new nodal state.
pub fn dispersive_step(state: &NodalState, dt: f64, solver: &DispersiveSolver) -> Result<NodalState> {
    let mut s = state.clone();
    solver.step(&mut s, dt)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PhysicalParams;
    use std::f64::consts::PI;

    fn model() -> Model {
        Model::new(PhysicalParams::one_layer_dimensional(9.81), 1.2).unwrap()
    }

    #[test]
    fn stencils_annihilate_constants_and_ramps() {
        for order in [FdOrder::Df2, FdOrder::Df4] {
            let st = FdStencils::new(order, BoundaryCondition::Periodic, 0.3);
            assert!(st.apply_d1(&[2.5; 12], Parity::Even).iter().all(|&x| x == 0.0));
            assert!(st.apply_d2(&[2.5; 12], Parity::Even).iter().all(|&x| x == 0.0));
            let st = FdStencils::new(order, BoundaryCondition::Reflective, 0.3);
            // odd ramp through the wall node 0
            let ramp: Vec<f64> = (0..12).map(|i| 0.25 * i as f64).collect();
            let d2 = st.apply_d2(&ramp, Parity::Odd);
            assert!(d2[..10].iter().all(|x| x.abs() < 1e-13));
        }
    }

    #[test]
    fn df4_first_derivative_converges() {
        let err = |n: usize| {
            let dx = 2.0 * PI / n as f64;
            let u: Vec<f64> = (0..n).map(|i| (i as f64 * dx).sin()).collect();
            let st = FdStencils::new(FdOrder::Df4, BoundaryCondition::Periodic, dx);
            st.apply_d1(&u, Parity::Even)
                .iter()
                .enumerate()
                .map(|(i, d)| (d - (i as f64 * dx).cos()).abs())
                .fold(0.0, f64::max)
        };
        let slope = (err(32) / err(64)).log2();
        assert!(slope > 3.7, "slope {slope}");
    }

    #[test]
    fn elliptic_solve_matches_discrete_symbol() {
        let n = 64;
        let l = 10.0;
        let dx = l / n as f64;
        let m = 3;
        for order in [FdOrder::Df2, FdOrder::Df4] {
            let op = EllipticOperator::new(n, dx, 0.4, order, BoundaryCondition::Periodic).unwrap();
            let th = 2.0 * PI * m as f64 / n as f64;
            let sigma = match order {
                FdOrder::Df2 => (2.0 - 2.0 * th.cos()) / (dx * dx),
                FdOrder::Df4 => (30.0 - 32.0 * th.cos() + 2.0 * (2.0 * th).cos()) / (12.0 * dx * dx),
            };
            let rhs: Vec<f64> = (0..n).map(|j| (th * j as f64).sin()).collect();
            let x = op.solve(&rhs);
            for (a, b) in x.iter().zip(&rhs) {
                assert!((a - b / (1.0 + 0.4 * sigma)).abs() < 1e-13);
            }
            let zero = op.solve(&vec![0.0; n]);
            assert!(zero.iter().all(|&z| z == 0.0));
        }
    }

    #[test]
    fn elliptic_residual_is_small() {
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Reflective] {
            for order in [FdOrder::Df2, FdOrder::Df4] {
                let nodes = if bc == BoundaryCondition::Periodic { 40 } else { 41 };
                let op = EllipticOperator::new(nodes, 0.05, 0.4, order, bc).unwrap();
                let mut b: Vec<f64> = (0..nodes).map(|i| (0.3 * i as f64).sin() + 0.1).collect();
                if bc == BoundaryCondition::Reflective {
                    b[0] = 0.0;
                    b[nodes - 1] = 0.0;
                }
                let x = op.solve(&b);
                let r = op.apply(&x);
                let bmax = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                for (ri, bi) in r.iter().zip(&b) {
                    assert!((ri - bi).abs() <= 1e-11 * bmax);
                }
            }
        }
    }

    #[test]
    fn rest_states_have_zero_acceleration() {
        let g = Grid::new(0.0, 10.0, 20).unwrap();
        for bc in [BoundaryCondition::Periodic, BoundaryCondition::Reflective] {
            for terms in [DispersiveTerms::Safe, DispersiveTerms::Naive] {
                let s = DispersiveSolver::new(&g, &model(), FdOrder::Df4, bc, terms, TimeScheme::Rk4).unwrap();
                let n = g.node_count(bc);
                for level in [0.0, 0.17] {
                    let a = dispersive_rhs(&vec![level; n], &vec![0.0; n], &s).unwrap();
                    assert!(a.iter().all(|&x| x == 0.0));
                }
            }
        }
    }

    #[test]
    fn q1_vanishes_on_reflective_ramp() {
        let g = Grid::new(0.0, 10.0, 20).unwrap();
        let bc = BoundaryCondition::Reflective;
        let m = model();
        let st = FdStencils::new(FdOrder::Df2, bc, g.dx());
        let op = assemble_elliptic(&g, &m, FdOrder::Df2, bc).unwrap();
        let v: Vec<f64> = (0..21).map(|i| 0.01 * i as f64).collect();
        let (q1, q2, q3) = q_terms(&[0.0; 21], &v, &m, &st, &op);
        assert!(q1[..20].iter().all(|x| x.abs() < 1e-14));
        assert!(q2.iter().chain(&q3).all(|&x| x == 0.0));
    }

    #[test]
    fn euler_is_rejected() {
        let g = Grid::new(0.0, 10.0, 20).unwrap();
        assert!(DispersiveSolver::new(
            &g,
            &model(),
            FdOrder::Df2,
            BoundaryCondition::Periodic,
            DispersiveTerms::Safe,
            TimeScheme::Euler
        )
        .is_err());
    }
}
