//! Linear dispersion relations, the optimal dispersion parameter, the
//! high-frequency stability relations and error norms.

use serde::{Deserialize, Serialize};

use crate::error::{GnError, Result};
use crate::model::{Model, PhysicalParams};

/// Squared frequency of the model for a plane wave of wavenumber `k` about
/// the rest state.
pub fn w2_gn(k: f64, model: &Model) -> f64 {
    let y = model.params.mu * k * k;
    let c = &model.coeffs;
    k * k * (1.0 + c.nu * (c.alpha_disp - 1.0) * y) / (1.0 + c.nu * c.alpha_disp * y)
}

/// Ratio `w2_fe / k^2` of the full Euler relation as a function of
/// `x = sqrt(mu) |k|`; equals 1 at `x = 0`.
pub fn euler_ratio(x: f64, p: &PhysicalParams) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        return 1.0;
    }
    let t1 = x.tanh();
    let t2 = (x / p.delta).tanh();
    p.gamma_plus_delta() * t1 * t2 * (1.0 + p.bo_inv * x * x) / (x * (t1 + p.gamma * t2))
}

/// Squared frequency of the full two-layer Euler system.
pub fn w2_fe(k: f64, p: &PhysicalParams) -> f64 {
    k * k * euler_ratio(p.mu.sqrt() * k, p)
}

/// Odd Taylor coefficients of `tanh`: `tanh x = sum a[k] x^(2k+1)`, from
/// `tanh' = 1 - tanh^2`.
fn tanh_coefficients<const N: usize>() -> [f64; N] {
    let mut a = [0.0; N];
    a[0] = 1.0;
    for k in 1..N {
        let s: f64 = (0..k).map(|i| a[i] * a[k - 1 - i]).sum();
        a[k] = -s / (2 * k + 1) as f64;
    }
    a
}

/// `tanh x - x + x^3 / 3`, accurate for small `x` where the terms cancel.
fn tanh_remainder(x: f64) -> f64 {
    if x.abs() >= 0.5 {
        return x.tanh() - x + x * x * x / 3.0;
    }
    let a = tanh_coefficients::<18>();
    let y = x * x;
    let mut s = 0.0;
    for &c in a[2..].iter().rev() {
        s = s * y + c;
    }
    s * x.powi(5)
}

/// `g(x) - 1 + nu x^2` without cancellation of the leading orders, where
/// `g` is the Euler ratio. The second- and fourth-order terms of the
/// expansion cancel identically and are removed analytically.
fn optimality_numerator(x: f64, p: &PhysicalParams) -> f64 {
    let (gamma, delta, b) = (p.gamma, p.delta, p.bo_inv);
    let nu = p.nu();
    let x2 = x * x;
    let x6 = x2 * x2 * x2;
    let d3 = delta * delta * delta;
    let u1 = x - x * x2 / 3.0;
    let u2 = x / delta - x * x2 / (3.0 * d3);
    let r1 = tanh_remainder(x);
    let r2 = tanh_remainder(x / delta);
    let high = x6 * (1.0 / (9.0 * d3) - b / (3.0 * d3) - b / (3.0 * delta))
        + x6 * x2 * b / (9.0 * d3);
    let e = p.gamma_plus_delta() * (high + (1.0 + b * x2) * (u1 * r2 + u2 * r1 + r1 * r2))
        - x6 * nu * (1.0 / 3.0 + gamma / (3.0 * d3))
        - x * (1.0 - nu * x2) * (r1 + gamma * r2);
    let t1 = x.tanh();
    let t2 = (x / delta).tanh();
    e / (x * (t1 + gamma * t2))
}

/// Value of the dispersion parameter for which the model relation matches
/// the Euler relation at wavenumber `k`.
pub fn alpha_opt(k: f64, p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    // the small-k limit is approached smoothly; below this the O(x^2)
    // correction is beneath round-off
    let x = (p.mu.sqrt() * k.abs()).max(1e-7);
    let nu = p.nu();
    let numerator = if x < 1.0 {
        optimality_numerator(x, p)
    } else {
        euler_ratio(x, p) - 1.0 + nu * x * x
    };
    let one_minus_g = nu * x * x - numerator;
    if one_minus_g == 0.0 || !one_minus_g.is_finite() {
        return Err(GnError::AlphaPole { k });
    }
    Ok(numerator / (nu * x * x * one_minus_g))
}

/// Ratio of the model phase velocity to the Euler phase velocity.
pub fn phase_velocity_ratio(k: f64, model: &Model) -> f64 {
    let fe = w2_fe(k, &model.params);
    if fe == 0.0 {
        return 1.0;
    }
    (w2_gn(k, model) / fe).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVariant {
    #[serde(rename = "safe_1layer")]
    Safe1Layer,
    #[serde(rename = "naive_1layer")]
    Naive1Layer,
    #[serde(rename = "safe_2layer")]
    Safe2Layer,
    #[serde(rename = "naive_2layer")]
    Naive2Layer,
}

impl StabilityVariant {
    pub fn is_naive(self) -> bool {
        matches!(self, StabilityVariant::Naive1Layer | StabilityVariant::Naive2Layer)
    }

    pub fn is_one_layer(self) -> bool {
        matches!(self, StabilityVariant::Safe1Layer | StabilityVariant::Naive1Layer)
    }
}

/// Constant background state `(zeta, v)` about which perturbations are
/// linearized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Background {
    pub zeta: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityValue {
    /// Squared intrinsic frequency; negative means exponential growth.
    pub w2: f64,
    /// Doppler shift `k v` of the one-layer relations, zero otherwise.
    pub advection_shift: f64,
}

/// High-frequency stability relation about a constant background.
pub fn stability_w2(k: f64, bg: Background, model: &Model, variant: StabilityVariant) -> Result<StabilityValue> {
    let p = &model.params;
    let c = &model.coeffs;
    if variant.is_one_layer() && (p.gamma != 0.0 || p.delta != 1.0) {
        return Err(GnError::InvalidParameter(
            "one-layer stability relations need gamma = 0 and delta = 1".into(),
        ));
    }
    let z = p.epsilon * bg.zeta;
    let f = model.nonlinearity(z)?.f;
    let y = p.mu * k * k;
    let elliptic = 1.0 + c.nu * c.alpha_disp * y;
    let coupling = c.nu * (c.kappa2 - c.kappa1) * y * z;
    let coupling = if variant.is_naive() {
        coupling
    } else {
        coupling / elliptic
    };
    let w2 = model.restoring() * f * k * k * (1.0 + c.nu * (c.alpha_disp - 1.0) * y - coupling)
        / elliptic;
    let advection_shift = if variant.is_one_layer() {
        p.epsilon * k * bg.v
    } else {
        0.0
    };
    Ok(StabilityValue { w2, advection_shift })
}

/// Discrete relative L2 error `||num - ref|| / ||ref||`.
pub fn l2_relative_error(numeric: &[f64], reference: &[f64]) -> Result<f64> {
    if numeric.len() != reference.len() {
        return Err(GnError::InvalidParameter(format!(
            "fields differ in length: {} vs {}",
            numeric.len(),
            reference.len()
        )));
    }
    let den: f64 = reference.iter().map(|r| r * r).sum();
    if den == 0.0 {
        return Err(GnError::ZeroReferenceNorm);
    }
    let num: f64 = numeric
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok((num / den).sqrt())
}
