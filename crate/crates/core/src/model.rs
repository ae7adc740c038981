//! Physical parameters, derived coefficients and nonlinearity functions of the
//! improved Green-Naghdi system, plus exact solitary waves and the initial
//! data used by the benchmark scenarios.
//!
//! All dimensionless quantities follow the usual two-layer scaling: `gamma`
//! is the density ratio, `delta` the depth ratio, `mu` the shallowness and
//! `epsilon` the amplitude parameter. Dimensional one-layer runs use
//! `mu = epsilon = 1`, `gamma = 0`, `delta = 1` and `g = 9.81`; gravity then
//! multiplies every `(gamma + delta) d_x zeta` term.

use serde::{Deserialize, Serialize};

use crate::error::{GnError, Result};
use crate::grid::Grid;
use crate::hyperbolic::CellState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub gamma: f64,
    pub delta: f64,
    pub mu: f64,
    pub epsilon: f64,
    pub bo_inv: f64,
    pub g: f64,
}

impl PhysicalParams {
    /// One layer, no surface tension, in dimensional units (depth 1).
    pub fn one_layer_dimensional(g: f64) -> Self {
        Self {
            gamma: 0.0,
            delta: 1.0,
            mu: 1.0,
            epsilon: 1.0,
            bo_inv: 0.0,
            g,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GnError::InvalidParameter(msg));
        let all = [
            self.gamma,
            self.delta,
            self.mu,
            self.epsilon,
            self.bo_inv,
            self.g,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return bad(format!("non-finite parameter in {self:?}"));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return bad(format!("gamma must lie in [0, 1), got {}", self.gamma));
        }
        if self.delta <= 0.0 {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if self.mu <= 0.0 {
            return bad(format!("mu must be positive, got {}", self.mu));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad(format!("epsilon must lie in [0, 1], got {}", self.epsilon));
        }
        if self.bo_inv < 0.0 {
            return bad(format!("bo_inv must be nonnegative, got {}", self.bo_inv));
        }
        if self.g <= 0.0 {
            return bad(format!("g must be positive, got {}", self.g));
        }
        if self.nu() <= 0.0 {
            return bad(format!(
                "nu = {} is not positive: outside the Camassa-Holm regime",
                self.nu()
            ));
        }
        Ok(())
    }

    pub fn lambda(&self) -> f64 {
        let (g, d) = (self.gamma, self.delta);
        (1.0 + g * d) / (3.0 * d * (g + d))
    }

    /// Ellipticity constant `nu = lambda - 1/bo`.
    pub fn nu(&self) -> f64 {
        self.lambda() - self.bo_inv
    }

    #[inline]
    pub fn gamma_plus_delta(&self) -> f64 {
        self.gamma + self.delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelCoefficients {
    pub lambda_c: f64,
    pub alpha_c: f64,
    pub beta_c: f64,
    pub nu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub varsigma: f64,
    pub kappa: f64,
    pub alpha_disp: f64,
}

pub fn derive_coefficients(p: &PhysicalParams, alpha_disp: f64) -> Result<ModelCoefficients> {
    p.validate()?;
    if !alpha_disp.is_finite() || alpha_disp < 1.0 {
        return Err(GnError::InvalidParameter(format!(
            "alpha must be >= 1 for linear stability, got {alpha_disp}"
        )));
    }
    let (gamma, delta) = (p.gamma, p.delta);
    let gd = gamma + delta;
    let lambda_c = p.lambda();
    let alpha_c = (1.0 - gamma) / (gd * gd);
    let beta_c = (1.0 + gamma * delta) * (delta * delta - gamma) / (delta * gd.powi(3));
    let nu = lambda_c - p.bo_inv;
    let kappa1 = gd * (2.0 * beta_c - alpha_c) / (3.0 * nu);
    let kappa2 = gd * beta_c / nu;
    let varsigma =
        ((2.0 * alpha_c - beta_c) / 3.0 - p.bo_inv * (delta * delta - gamma) / (gd * gd)) / nu;
    let kappa = 2.0 / 3.0 * (1.0 - gamma) / (gd * gd);
    Ok(ModelCoefficients {
        lambda_c,
        alpha_c,
        beta_c,
        nu,
        kappa1,
        kappa2,
        varsigma,
        kappa,
        alpha_disp,
    })
}

/// Values of the nonlinearity functions at a pre-scaled deformation
/// `zeta_eff = epsilon * zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonlinearity {
    pub f: f64,
    pub df: f64,
    pub d2f: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub dq3: f64,
}

/// Parameters and derived coefficients travelling together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model {
    pub params: PhysicalParams,
    pub coeffs: ModelCoefficients,
}

impl Model {
    pub fn new(params: PhysicalParams, alpha_disp: f64) -> Result<Self> {
        let coeffs = derive_coefficients(&params, alpha_disp)?;
        Ok(Self { params, coeffs })
    }

    /// `g (gamma + delta)`: the coefficient of every hydrostatic gradient.
    #[inline]
    pub fn restoring(&self) -> f64 {
        self.params.g * self.params.gamma_plus_delta()
    }

    /// Layer depths `(h1, h2)`, rejecting vanishing layers.
    #[inline]
    pub fn depths(&self, zeta_eff: f64) -> Result<(f64, f64)> {
        let h1 = 1.0 - zeta_eff;
        let h2 = 1.0 / self.params.delta + zeta_eff;
        if h1 > 0.0 && h2 > 0.0 {
            Ok((h1, h2))
        } else {
            Err(GnError::DegenerateDepth { h1, h2 })
        }
    }

    pub fn nonlinearity(&self, zeta_eff: f64) -> Result<Nonlinearity> {
        let (h1, h2) = self.depths(zeta_eff)?;
        let gamma = self.params.gamma;
        let den = h1 + gamma * h2;
        let f = h1 * h2 / den;
        let df = (h1 * h1 - gamma * h2 * h2) / (den * den);
        let d2f = -2.0 * gamma * (h1 + h2).powi(2) / den.powi(3);
        let c = &self.coeffs;
        Ok(Nonlinearity {
            f,
            df,
            d2f,
            q1: 1.0 + c.kappa1 * zeta_eff,
            q2: 1.0 + c.kappa2 * zeta_eff,
            q3: 0.5 * (df - c.varsigma),
            dq3: 0.5 * d2f,
        })
    }

    /// Strict hyperbolicity of the shallow-water part at every cell.
    /// The margin is the smallest slack among the three conditions.
    pub fn hyperbolicity_check(&self, state: &CellState) -> HyperbolicityReport {
        let eps = self.params.epsilon;
        let gamma = self.params.gamma;
        let mut margin = f64::INFINITY;
        let mut worst = 0;
        for (i, (&z, &v)) in state.zeta().iter().zip(state.v()).enumerate() {
            let h1 = 1.0 - eps * z;
            let h2 = 1.0 / self.params.delta + eps * z;
            let mut m = h1.min(h2);
            if h1 > 0.0 && h2 > 0.0 {
                let s = self.restoring()
                    - gamma * (h1 + h2).powi(2) * eps * eps * v * v / (h1 + gamma * h2).powi(3);
                m = m.min(s);
            }
            if m < margin {
                margin = m;
                worst = i;
            }
        }
        HyperbolicityReport {
            hyperbolic: margin > 0.0,
            margin,
            worst_cell: worst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicityReport {
    pub hyperbolic: bool,
    pub margin: f64,
    pub worst_cell: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub a: f64,
    pub d2: f64,
    pub x0: f64,
}

impl SolitonParams {
    pub fn speed(&self, g: f64) -> f64 {
        (g * (self.d2 + self.a)).sqrt()
    }

    pub fn wavenumber(&self) -> f64 {
        (3.0 * self.a).sqrt() / (2.0 * self.d2 * (self.d2 + self.a).sqrt())
    }
}

/// Exact one-layer Green-Naghdi solitary wave in dimensional variables,
/// travelling to the right.
pub fn solitary_wave(s: &SolitonParams, g: f64, t: f64, x: f64) -> (f64, f64) {
    let c = s.speed(g);
    let sech = 1.0 / (s.wavenumber() * (x - s.x0 - c * t)).cosh();
    let zeta = s.a * sech * sech;
    (zeta, c * zeta / (s.d2 + zeta))
}

/// Solitary wave on a periodic domain of length `period`, summing the
/// nearest images.
pub fn periodic_solitary_wave(s: &SolitonParams, g: f64, t: f64, x: f64, period: f64) -> (f64, f64) {
    let c = s.speed(g);
    let centre = s.x0 + c * t;
    // fold the crest position so the image sum stays centred
    let shift = ((x - centre) / period).round() * period;
    (-2..=2).fold((0.0, 0.0), |(z, v), m| {
        let (dz, dv) = solitary_wave(s, g, t, x - shift - m as f64 * period);
        (z + dz, v + dv)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// Right-going solitary wave of amplitude `a` on depth `d2` centred at `x0`.
    Soliton { a: f64, d2: f64, x0: f64 },
    /// Two equal solitary waves, the left one right-going, the right one left-going.
    Collision {
        a: f64,
        d2: f64,
        x_left: f64,
        x_right: f64,
    },
    /// Gaussian heap `a exp(-(x - x_c)^2 / width)` centred on the domain.
    Hump { a: f64, width: f64 },
    /// Smoothed dam `a (1 + tanh(half_width - |x|))`.
    DamBreak { a: f64, half_width: f64 },
    /// Interface trough `a exp(-rate x^2)`.
    Trough { a: f64, rate: f64 },
}

const GAUSS5: [(f64, f64); 3] = [
    (0.0, 0.568_888_888_888_888_9),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Five-point Gauss-Legendre cell average. Mirror pairs are summed first so
/// that even/odd profiles give bit-symmetric averages.
fn cell_average(f: impl Fn(f64) -> f64, centre: f64, dx: f64) -> f64 {
    let h = 0.5 * dx;
    let mut acc = GAUSS5[0].1 * f(centre);
    for &(s, w) in &GAUSS5[1..] {
        acc += w * (f(centre + s * h) + f(centre - s * h));
    }
    0.5 * acc
}

impl InitialCondition {
    pub fn point_value(&self, grid: &Grid, g: f64, x: f64) -> (f64, f64) {
        let period = grid.length();
        match *self {
            InitialCondition::Soliton { a, d2, x0 } => {
                periodic_solitary_wave(&SolitonParams { a, d2, x0 }, g, 0.0, x, period)
            }
            InitialCondition::Collision {
                a,
                d2,
                x_left,
                x_right,
            } => {
                let left = SolitonParams { a, d2, x0: x_left };
                let (zl, vl) = periodic_solitary_wave(&left, g, 0.0, x, period);
                // a left-going wave is the mirror image of a right-going one
                let right = SolitonParams {
                    a,
                    d2,
                    x0: -x_right,
                };
                let (zr, vr) = periodic_solitary_wave(&right, g, 0.0, -x, period);
                (zl + zr, vl - vr)
            }
            InitialCondition::Hump { a, width } => {
                let xc = 0.5 * (grid.x_min + grid.x_max);
                (a * (-(x - xc).powi(2) / width).exp(), 0.0)
            }
            InitialCondition::DamBreak { a, half_width } => {
                (a * (1.0 + (half_width - x.abs()).tanh()), 0.0)
            }
            InitialCondition::Trough { a, rate } => (a * (-rate * x * x).exp(), 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            InitialCondition::Soliton { a, d2, .. } | InitialCondition::Collision { a, d2, .. } => {
                a > 0.0 && d2 > 0.0
            }
            InitialCondition::Hump { width, .. } => width > 0.0,
            InitialCondition::DamBreak { .. } => true,
            InitialCondition::Trough { rate, .. } => rate > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(GnError::InvalidParameter(format!(
                "inadmissible initial condition {self:?}"
            )))
        }
    }
}

/// Cell-averaged initial state.
pub fn initial_condition(kind: &InitialCondition, grid: &Grid, params: &PhysicalParams) -> Result<CellState> {
    kind.validate()?;
    let dx = grid.dx();
    let g = params.g;
    let (zeta, v): (Vec<f64>, Vec<f64>) = (0..grid.cells)
        .map(|i| {
            let xc = grid.cell_center(i);
            let z = cell_average(|x| kind.point_value(grid, g, x).0, xc, dx);
            let v = cell_average(|x| kind.point_value(grid, g, x).1, xc, dx);
            (z, v)
        })
        .unzip();
    Ok(CellState::from_interior(&zeta, &v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_layer() -> PhysicalParams {
        PhysicalParams {
            gamma: 0.95,
            delta: 0.5,
            mu: 1.0,
            epsilon: 1.0,
            bo_inv: 5e-5,
            g: 1.0,
        }
    }

    #[test]
    fn one_layer_coefficients() {
        let c = derive_coefficients(&PhysicalParams::one_layer_dimensional(1.0), 1.0).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() < 1e-15;
        assert!(close(c.lambda_c, 1.0 / 3.0));
        assert!(close(c.nu, 1.0 / 3.0));
        assert!(close(c.kappa1, 1.0));
        assert!(close(c.kappa2, 3.0));
        assert!(close(c.varsigma, 1.0));
        assert!(close(c.kappa, 2.0 / 3.0));
        // one-layer system: (I + alpha/3 T[0]), Q2 with unit factor, Q3 with 1/3
        assert!(close(c.nu * c.alpha_disp, 1.0 / 3.0));
        assert!(close(c.nu * c.kappa2, 1.0));
        assert!(close(c.nu * c.kappa1, 1.0 / 3.0));
    }

    #[test]
    fn two_layer_golden_coefficients() {
        // Golden values from an exact rational evaluation of the defining
        // formulas (gamma = 19/20, delta = 1/2, 1/bo = 1/20000).
        let c = derive_coefficients(&two_layer(), 1.0).unwrap();
        let golden = [
            (c.lambda_c, 0.678_160_919_540_229_8),
            (c.alpha_c, 0.023_781_212_841_854_936),
            (c.beta_c, -0.677_354_545_081_799_2),
            (c.nu, 0.678_110_919_540_229_8),
            (c.kappa1, -0.982_538_835_344_289_1),
            (c.kappa2, -1.448_382_649_603_300_8),
            (c.varsigma, 0.356_365_942_710_383_4),
            (c.kappa, 0.015_854_141_894_569_955),
        ];
        for (got, want) in golden {
            assert!(((got - want) / want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn ellipticity_boundary_is_rejected() {
        let mut p = PhysicalParams::one_layer_dimensional(9.81);
        p.bo_inv = p.lambda();
        assert!(matches!(
            derive_coefficients(&p, 1.0),
            Err(GnError::InvalidParameter(_))
        ));
        let p = PhysicalParams::one_layer_dimensional(9.81);
        assert!(derive_coefficients(&p, 0.99).is_err());
    }

    #[test]
    fn coefficient_identities_hold() {
        for p in [PhysicalParams::one_layer_dimensional(9.81), two_layer()] {
            let c = derive_coefficients(&p, 1.2).unwrap();
            let gd = p.gamma_plus_delta();
            let rel = |a: f64, b: f64| (a - b).abs() <= 1e-14 * b.abs().max(1e-300);
            assert!(rel(c.nu * c.kappa1, gd * (2.0 * c.beta_c - c.alpha_c) / 3.0));
            assert!(rel(c.nu * c.kappa2, gd * c.beta_c));
            assert!(rel(
                c.nu * c.varsigma,
                (2.0 * c.alpha_c - c.beta_c) / 3.0
                    - p.bo_inv * (p.delta * p.delta - p.gamma) / (gd * gd)
            ));
        }
    }

    #[test]
    fn nonlinearity_at_rest() {
        let m = Model::new(PhysicalParams::one_layer_dimensional(1.0), 1.0).unwrap();
        let n = m.nonlinearity(0.0).unwrap();
        assert_eq!((n.f, n.df, n.d2f, n.q3), (1.0, 1.0, 0.0, 0.0));

        let m = Model::new(two_layer(), 1.0).unwrap();
        let n = m.nonlinearity(0.0).unwrap();
        assert!((n.f - 1.0 / 1.45).abs() < 1e-15);

        assert!(matches!(
            m.nonlinearity(1.0),
            Err(GnError::DegenerateDepth { .. })
        ));
        assert!(m.nonlinearity(-2.0).is_err());
    }

    #[test]
    fn nonlinearity_derivatives_match_differences() {
        let m = Model::new(two_layer(), 1.0).unwrap();
        let h = 1e-5;
        for &z in &[-0.6, -0.2, 0.0, 0.3, 0.7] {
            let n = m.nonlinearity(z).unwrap();
            let p = m.nonlinearity(z + h).unwrap();
            let q = m.nonlinearity(z - h).unwrap();
            assert!(((p.f - q.f) / (2.0 * h) - n.df).abs() < 1e-8);
            assert!(((p.df - q.df) / (2.0 * h) - n.d2f).abs() < 1e-7);
            assert!(((p.q3 - q.q3) / (2.0 * h) - n.dq3).abs() < 1e-7);
        }
    }

    #[test]
    fn soliton_crest_and_speed() {
        let s = SolitonParams {
            a: 0.2,
            d2: 1.0,
            x0: 20.0,
        };
        let c = s.speed(9.81);
        assert!((c - (9.81f64 * 1.2).sqrt()).abs() < 1e-15);
        assert!((c - 3.4310).abs() < 1e-4);
        let (z, v) = solitary_wave(&s, 9.81, 3.0, 20.0 + 3.0 * c);
        assert!((z - 0.2).abs() < 1e-15);
        assert!((v - c * 0.2 / 1.2).abs() < 1e-14);
        let (z, v) = solitary_wave(&s, 9.81, 0.0, 1.0e4);
        assert!(z < 1e-300 && v < 1e-300);
    }

    #[test]
    fn initial_condition_peaks() {
        let p = PhysicalParams::one_layer_dimensional(9.81);
        let g = Grid::new(-700.0, 700.0, 2800).unwrap();
        let dam = InitialCondition::DamBreak {
            a: 0.2091,
            half_width: 250.0,
        };
        let (z, v) = dam.point_value(&g, 9.81, 0.0);
        assert!((z - 2.0 * 0.2091).abs() < 1e-15 && v == 0.0);

        let g2 = Grid::new(0.0, 400.0, 2000).unwrap();
        let hump = InitialCondition::Hump { a: 0.4, width: 40.0 };
        assert_eq!(hump.point_value(&g2, 9.81, 200.0), (0.4, 0.0));

        let kh = InitialCondition::Trough { a: -1.0, rate: 4.0 };
        assert_eq!(kh.point_value(&g, 1.0, 0.0), (-1.0, 0.0));

        let s = initial_condition(&dam, &g, &p).unwrap();
        let z = s.zeta();
        let n = z.len();
        for i in 0..n / 2 {
            assert_eq!(z[i], z[n - 1 - i]);
        }
        assert!(s.v().iter().all(|&v| v == 0.0));
    }
}
