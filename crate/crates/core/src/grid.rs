//! Uniform 1-D mesh and boundary handling shared by the finite-volume and
//! finite-difference halves of the solver.
//!
//! Cells are indexed `0..N`; cell `i` spans `[x_min + i dx, x_min + (i+1) dx]`.
//! Nodes sit on cell interfaces: node `j` is at `x_min + j dx`. Under periodic
//! conditions there are `N` nodes (node `N` is node `0`), under reflective
//! conditions there are `N + 1` nodes and the walls are nodes `0` and `N`.

use serde::{Deserialize, Serialize};

use crate::error::{GnError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Periodic,
    Reflective,
}

/// Behaviour of a field under the mirror `x -> -x` used by reflective walls.
/// Interface deformation is even, velocities and first derivatives of even
/// fields are odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, cells: usize) -> Result<Self> {
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(GnError::InvalidParameter(format!(
                "domain ({x_min}, {x_max}) is empty or not finite"
            )));
        }
        if cells < 8 {
            return Err(GnError::InvalidParameter(format!(
                "at least 8 cells are required, got {cells}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            cells,
        })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.cells as f64
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    #[inline]
    pub fn cell_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn cell_centers(&self) -> Vec<f64> {
        (0..self.cells).map(|i| self.cell_center(i)).collect()
    }

    pub fn node_count(&self, bc: BoundaryCondition) -> usize {
        match bc {
            BoundaryCondition::Periodic => self.cells,
            BoundaryCondition::Reflective => self.cells + 1,
        }
    }

    pub fn node_positions(&self, bc: BoundaryCondition) -> Vec<f64> {
        (0..self.node_count(bc))
            .map(|j| self.x_min + j as f64 * self.dx())
            .collect()
    }
}

/// Maps a (possibly out-of-range) cell index onto a stored cell and a sign.
#[inline]
pub(crate) fn cell_source(k: isize, n: usize, bc: BoundaryCondition, parity: Parity) -> (usize, f64) {
    let n = n as isize;
    match bc {
        BoundaryCondition::Periodic => (k.rem_euclid(n) as usize, 1.0),
        BoundaryCondition::Reflective => {
            if k < 0 {
                ((-k - 1) as usize, parity.sign())
            } else if k >= n {
                ((2 * n - 1 - k) as usize, parity.sign())
            } else {
                (k as usize, 1.0)
            }
        }
    }
}

/// Maps a (possibly out-of-range) node index onto a stored node and a sign.
/// `len` is the number of stored nodes.
#[inline]
pub(crate) fn node_source(k: isize, len: usize, bc: BoundaryCondition, parity: Parity) -> (usize, f64) {
    let len = len as isize;
    match bc {
        BoundaryCondition::Periodic => (k.rem_euclid(len) as usize, 1.0),
        BoundaryCondition::Reflective => {
            let last = len - 1;
            if k < 0 {
                ((-k) as usize, parity.sign())
            } else if k > last {
                ((2 * last - k) as usize, parity.sign())
            } else {
                (k as usize, 1.0)
            }
        }
    }
}

/// Cell values padded with `pad` ghost cells on each side.
pub fn pad_cells(values: &[f64], bc: BoundaryCondition, parity: Parity, pad: usize) -> Vec<f64> {
    let n = values.len();
    (-(pad as isize)..(n + pad) as isize)
        .map(|k| {
            let (src, sign) = cell_source(k, n, bc, parity);
            sign * values[src]
        })
        .collect()
}

/// Nodal values padded with `pad` ghost nodes on each side.
pub fn pad_nodes(values: &[f64], bc: BoundaryCondition, parity: Parity, pad: usize) -> Vec<f64> {
    let len = values.len();
    (-(pad as isize)..(len + pad) as isize)
        .map(|k| {
            let (src, sign) = node_source(k, len, bc, parity);
            sign * values[src]
        })
        .collect()
}
