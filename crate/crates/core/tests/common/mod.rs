//! Dense-matrix reference implementations. Every operator is written out
//! as an explicit matrix (padding, stencils, divergence) and every pointwise
//! formula is re-derived here rather than borrowed from the crate.

#![allow(dead_code)]

use gnwave::dispersive::FdOrder;
use gnwave::grid::BoundaryCondition;
use gnwave::hyperbolic::FvOrder;
use gnwave::model::{Model, PhysicalParams};
use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

pub fn params(gamma: f64, delta: f64, mu: f64, epsilon: f64, bo_inv: f64, g: f64) -> PhysicalParams {
    PhysicalParams {
        gamma,
        delta,
        mu,
        epsilon,
        bo_inv,
        g,
    }
}

/// One layer, depth 1, dimensional gravity.
pub fn one_layer() -> Model {
    Model::new(params(0.0, 1.0, 1.0, 1.0, 0.0, 9.81), 1.2).unwrap()
}

/// Two layers in the stable regime with surface tension.
pub fn two_layer() -> Model {
    Model::new(params(0.95, 0.5, 0.1, 0.5, 5e-5, 1.0), 1.271).unwrap()
}

/// Deterministic rough test data: smooth modes plus a hashed perturbation.
pub fn wiggly(n: usize, amp: f64, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    (0..n)
        .map(|i| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let r = (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            let x = i as f64 / n as f64;
            amp * ((2.0 * std::f64::consts::PI * x).sin() + 0.4 * (6.0 * std::f64::consts::PI * x).cos() + 0.6 * r)
        })
        .collect()
}

/// `(n + 2 pad) x n` matrix filling `pad` ghost cells on each side.
/// Reflective walls sit half a cell outside the first and last centres.
pub fn cell_padding(n: usize, pad: usize, bc: BoundaryCondition, odd: bool) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(n + 2 * pad, n);
    let sign = if odd { -1.0 } else { 1.0 };
    for row in 0..n + 2 * pad {
        let k = row as i64 - pad as i64;
        let (src, s) = if (0..n as i64).contains(&k) {
            (k, 1.0)
        } else {
            match bc {
                BoundaryCondition::Periodic => ((k + n as i64) % n as i64, 1.0),
                BoundaryCondition::Reflective if k < 0 => (-1 - k, sign),
                BoundaryCondition::Reflective => (2 * n as i64 - 1 - k, sign),
            }
        };
        p[(row, src as usize)] = s;
    }
    p
}

/// Same for nodes; reflective walls sit on the first and last node.
pub fn node_padding(len: usize, pad: usize, bc: BoundaryCondition, odd: bool) -> DMatrix<f64> {
    let mut p = DMatrix::zeros(len + 2 * pad, len);
    let sign = if odd { -1.0 } else { 1.0 };
    let last = len as i64 - 1;
    for row in 0..len + 2 * pad {
        let k = row as i64 - pad as i64;
        let (src, s) = if (0..=last).contains(&k) {
            (k, 1.0)
        } else {
            match bc {
                BoundaryCondition::Periodic => ((k + len as i64) % len as i64, 1.0),
                BoundaryCondition::Reflective if k < 0 => (-k, sign),
                BoundaryCondition::Reflective => (2 * last - k, sign),
            }
        };
        p[(row, src as usize)] = s;
    }
    p
}

/// `len x (len + 2 pad)` band with `weights` on every row.
pub fn stencil(len: usize, weights: &[f64]) -> DMatrix<f64> {
    let w = weights.len();
    let mut m = DMatrix::zeros(len, len + w - 1);
    for i in 0..len {
        for (k, &c) in weights.iter().enumerate() {
            m[(i, i + k)] = c;
        }
    }
    m
}

fn d1_weights(order: FdOrder) -> Vec<f64> {
    match order {
        FdOrder::Df2 => vec![-0.5, 0.0, 0.5],
        FdOrder::Df4 => vec![1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0],
    }
}

fn d2_weights(order: FdOrder) -> Vec<f64> {
    match order {
        FdOrder::Df2 => vec![1.0, -2.0, 1.0],
        FdOrder::Df4 => vec![-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0],
    }
}

fn pad_of(order: FdOrder) -> usize {
    d1_weights(order).len() / 2
}

pub fn node_count(cells: usize, bc: BoundaryCondition) -> usize {
    match bc {
        BoundaryCondition::Periodic => cells,
        BoundaryCondition::Reflective => cells + 1,
    }
}

pub fn d1_matrix(len: usize, bc: BoundaryCondition, order: FdOrder, odd: bool, dx: f64) -> DMatrix<f64> {
    stencil(len, &d1_weights(order)) * node_padding(len, pad_of(order), bc, odd) / dx
}

pub fn d2_matrix(len: usize, bc: BoundaryCondition, order: FdOrder, odd: bool, dx: f64) -> DMatrix<f64> {
    stencil(len, &d2_weights(order)) * node_padding(len, pad_of(order), bc, odd) / (dx * dx)
}

/// `I - c D2` on odd fields.
pub fn elliptic_matrix(len: usize, bc: BoundaryCondition, order: FdOrder, c: f64, dx: f64) -> DMatrix<f64> {
    DMatrix::identity(len, len) - d2_matrix(len, bc, order, true, dx) * c
}

pub fn dense_solve(a: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    a.clone()
        .lu()
        .solve(&DVector::from_column_slice(b))
        .expect("oracle matrix is invertible")
        .as_slice()
        .to_vec()
}

fn mat_vec(a: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (a * DVector::from_column_slice(x)).as_slice().to_vec()
}

/// `f`, `f'`, `f''` of `h1 h2 / (h1 + gamma h2)` at `z = epsilon zeta`,
/// from the quotient rule.
pub fn f_derivatives(z: f64, p: &PhysicalParams) -> (f64, f64, f64) {
    let h1 = 1.0 - z;
    let h2 = 1.0 / p.delta + z;
    let num = h1 * h2;
    let dnum = h1 - h2;
    let den = h1 + p.gamma * h2;
    let dden = p.gamma - 1.0;
    let f = num / den;
    let df = (dnum * den - num * dden) / (den * den);
    let d2f = -2.0 / den - 2.0 * dden * df / den;
    (f, df, d2f)
}

fn flux(u: Vector2<f64>, m: &Model) -> Vector2<f64> {
    let p = &m.params;
    let (f, df, _) = f_derivatives(p.epsilon * u[0], p);
    Vector2::new(
        f * u[1],
        0.5 * p.epsilon * df * u[1] * u[1] + p.g * (p.gamma + p.delta) * u[0],
    )
}

/// Linearized Riemann solution at `x/t = 0`, from the eigenvector basis.
fn vfroe(ul: Vector2<f64>, ur: Vector2<f64>, m: &Model) -> Vector2<f64> {
    let p = &m.params;
    let mean = 0.5 * (ul + ur);
    let (f, df, d2f) = f_derivatives(p.epsilon * mean[0], p);
    let a = p.epsilon * df * mean[1];
    let b = f;
    let c = p.g * (p.gamma + p.delta) + 0.5 * p.epsilon * p.epsilon * d2f * mean[1] * mean[1];
    let s = (b * c).sqrt();
    let (l1, l2) = (a - s, a + s);
    let r = Matrix2::new(-b / s, b / s, 1.0, 1.0);
    let coef = r.try_inverse().unwrap() * (ur - ul);
    let mut u = ul;
    if l1 < 0.0 {
        u += coef[0] * r.column(0);
    }
    if l2 < 0.0 {
        u += coef[1] * r.column(1);
    }
    u
}

fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}

/// `(minus, plus)` traces of every padded cell, `None` where the stencil
/// does not fit.
fn traces(u: &[f64], order: FvOrder) -> Vec<Option<(f64, f64)>> {
    let len = u.len();
    // unlimited fifth-order values at the right face of each cell
    let five = [2.0 / 60.0, -13.0 / 60.0, 47.0 / 60.0, 27.0 / 60.0, -3.0 / 60.0];
    let right_face = mat_vec(&stencil(len - 4, &five), u);
    let mirrored: Vec<f64> = u.iter().rev().copied().collect();
    let left_face: Vec<f64> = mat_vec(&stencil(len - 4, &five), &mirrored).into_iter().rev().collect();
    (0..len)
        .map(|c| {
            if c < 2 || c + 2 >= len {
                return None;
            }
            let back = u[c] - u[c - 1];
            let fwd = u[c + 1] - u[c];
            Some(match order {
                FvOrder::Fv1 => (u[c], u[c]),
                FvOrder::Muscl => {
                    let s = minmod(fwd, back);
                    (u[c] - 0.5 * s, u[c] + 0.5 * s)
                }
                FvOrder::Weno5 => {
                    let limit = |a: f64, b: f64, w: f64| {
                        if a * b > 0.0 {
                            a.signum() * (2.0 * a.abs()).min(2.0 * b.abs()).min(w.abs())
                        } else {
                            0.0
                        }
                    };
                    let wp = 2.0 * (right_face[c - 2] - u[c]);
                    let wm = 2.0 * (u[c] - left_face[c - 2]);
                    (u[c] - 0.5 * limit(fwd, back, wm), u[c] + 0.5 * limit(back, fwd, wp))
                }
            })
        })
        .collect()
}

/// `-(F_{i+1/2} - F_{i-1/2}) / dx` from explicit padding, traces and a dense
/// divergence matrix.
pub fn hyperbolic_rhs(
    zeta: &[f64],
    v: &[f64],
    m: &Model,
    order: FvOrder,
    bc: BoundaryCondition,
    dx: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = zeta.len();
    let pad = 3;
    let zp = mat_vec(&cell_padding(n, pad, bc, false), zeta);
    let vp = mat_vec(&cell_padding(n, pad, bc, true), v);
    let tz = traces(&zp, order);
    let tv = traces(&vp, order);
    let mut fz = vec![0.0; n + 1];
    let mut fv = vec![0.0; n + 1];
    for j in 0..=n {
        let (l, r) = (j + pad - 1, j + pad);
        let ul = Vector2::new(tz[l].unwrap().1, tv[l].unwrap().1);
        let ur = Vector2::new(tz[r].unwrap().0, tv[r].unwrap().0);
        let f = flux(vfroe(ul, ur, m), m);
        fz[j] = f[0];
        fv[j] = f[1];
    }
    let mut div = DMatrix::zeros(n, n + 1);
    for i in 0..n {
        div[(i, i)] = 1.0 / dx;
        div[(i, i + 1)] = -1.0 / dx;
    }
    (mat_vec(&div, &fz), mat_vec(&div, &fv))
}

/// `(Q1, Q2, Q3)` of the regularized form.
pub fn q_terms(
    zeta: &[f64],
    v: &[f64],
    m: &Model,
    order: FdOrder,
    bc: BoundaryCondition,
    dx: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let len = zeta.len();
    let (p, c) = (&m.params, &m.coeffs);
    let d1e = d1_matrix(len, bc, order, false, dx);
    let d1o = d1_matrix(len, bc, order, true, dx);
    let d2o = d2_matrix(len, bc, order, true, dx);
    let a = elliptic_matrix(len, bc, order, p.mu * c.nu * c.alpha_disp, dx);
    let d1v = mat_vec(&d1o, v);
    let d2v = mat_vec(&d2o, v);
    let q1: Vec<f64> = (0..len).map(|i| 2.0 * c.kappa * d1v[i] * d2v[i]).collect();
    let grad: Vec<f64> = mat_vec(&d1e, zeta)
        .iter()
        .map(|d| p.g * (p.gamma + p.delta) * d)
        .collect();
    let w = dense_solve(&a, &grad);
    let dw = mat_vec(&d1o, &w);
    let inner: Vec<f64> = (0..len).map(|i| zeta[i] * dw[i]).collect();
    let q2: Vec<f64> = mat_vec(&d1e, &inner).iter().map(|x| c.kappa2 * x).collect();
    let d2w = mat_vec(&d2o, &w);
    let q3: Vec<f64> = (0..len).map(|i| -c.kappa1 * zeta[i] * d2w[i]).collect();
    (q1, q2, q3)
}

/// Dispersive acceleration of `v` at frozen `zeta`, safe form.
pub fn dispersive_rhs(
    zeta: &[f64],
    v: &[f64],
    m: &Model,
    order: FdOrder,
    bc: BoundaryCondition,
    dx: f64,
) -> Vec<f64> {
    let len = zeta.len();
    let (p, c) = (&m.params, &m.coeffs);
    let eps = p.epsilon;
    let d1e = d1_matrix(len, bc, order, false, dx);
    let d1o = d1_matrix(len, bc, order, true, dx);
    let a = elliptic_matrix(len, bc, order, p.mu * c.nu * c.alpha_disp, dx);
    let dz = mat_vec(&d1e, zeta);
    let dv = mat_vec(&d1o, v);
    let (q1, q2, q3) = q_terms(zeta, v, m, order, bc, dx);
    let b: Vec<f64> = (0..len)
        .map(|i| {
            let (_, df, d2f) = f_derivatives(eps * zeta[i], p);
            let q3i = 0.5 * (df - c.varsigma);
            let dq3i = 0.5 * d2f;
            (p.g * (p.gamma + p.delta) * dz[i]
                + 2.0 * eps * q3i * v[i] * dv[i]
                + eps * eps * dq3i * dz[i] * v[i] * v[i])
                / c.alpha_disp
        })
        .collect();
    let rhs: Vec<f64> = (0..len)
        .map(|i| b[i] + p.mu * eps * q1[i] + p.mu * eps * c.nu * (q2[i] + q3[i]))
        .collect();
    let y = dense_solve(&a, &rhs);
    (0..len).map(|i| b[i] - y[i]).collect()
}

/// Largest difference scaled by the larger of 1 and the reference norm.
pub fn scaled_diff(got: &[f64], want: &[f64]) -> f64 {
    assert_eq!(got.len(), want.len());
    let scale = want.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    got.iter()
        .zip(want)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        / scale
}
