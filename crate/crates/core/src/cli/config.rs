//! Run configuration: a single flat JSON document.
//!
//! ```json
//! {
//!   "scenario": "soliton",
//!   "x_min": 0.0, "x_max": 200.0, "cells": 1280, "bc": "periodic",
//!   "gamma": 0.0, "delta": 1.0, "mu": 1.0, "epsilon": 1.0, "bo_inv": 0.0, "g": 9.81,
//!   "alpha": 1.0,
//!   "fv_order": "weno5", "fd_order": "df4", "time_scheme": "rk4",
//!   "t_end": 5.0, "snapshot_times": [0.0, 5.0],
//!   "initial": { "kind": "soliton", "a": 0.2, "d2": 1.0, "x0": 20.0 }
//! }
//! ```
//!
//! `alpha` is either a number or `"auto@K"`, which selects the value that
//! matches the Euler dispersion relation at wavenumber `K`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::alpha_opt;
use crate::dispersive::FdOrder;
use crate::error::{GnError, Result};
use crate::grid::{BoundaryCondition, Grid};
use crate::hyperbolic::{FvOrder, TimeScheme};
use crate::model::{InitialCondition, Model, PhysicalParams};
use crate::splitting::{Dispersion, RunControl, Scheme};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaSpec {
    Value(f64),
    /// Optimal value at the given wavenumber.
    Auto(f64),
}

impl AlphaSpec {
    pub fn resolve(&self, params: &PhysicalParams) -> Result<f64> {
        match *self {
            AlphaSpec::Value(a) => Ok(a),
            AlphaSpec::Auto(k) => alpha_opt(k, params),
        }
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Value(a) => write!(f, "{a}"),
            AlphaSpec::Auto(k) => write!(f, "auto@{k}"),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = GnError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GnError::Config(format!("alpha must be a number or \"auto@K\", got {s:?}"));
        match s.strip_prefix("auto@") {
            Some(k) => k.trim().parse().map(AlphaSpec::Auto).map_err(|_| bad()),
            None => s.trim().parse().map(AlphaSpec::Value).map_err(|_| bad()),
        }
    }
}

impl Serialize for AlphaSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaSpec::Value(a) => s.serialize_f64(*a),
            AlphaSpec::Auto(_) => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(a) => Ok(AlphaSpec::Value(a)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn default_bc() -> BoundaryCondition {
    BoundaryCondition::Periodic
}
fn zero() -> f64 {
    0.0
}
fn one() -> f64 {
    1.0
}
fn gravity() -> f64 {
    9.81
}
fn default_alpha() -> AlphaSpec {
    AlphaSpec::Value(1.0)
}
fn default_fv() -> FvOrder {
    FvOrder::Weno5
}
fn default_fd() -> FdOrder {
    FdOrder::Df4
}
fn default_time() -> TimeScheme {
    TimeScheme::Rk4
}
fn default_dispersion() -> Dispersion {
    Dispersion::Safe
}
fn default_instability() -> f64 {
    5.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    pub x_min: f64,
    pub x_max: f64,
    pub cells: usize,
    #[serde(default = "default_bc")]
    pub bc: BoundaryCondition,
    #[serde(default = "zero")]
    pub gamma: f64,
    #[serde(default = "one")]
    pub delta: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default = "one")]
    pub epsilon: f64,
    #[serde(default = "zero")]
    pub bo_inv: f64,
    #[serde(default = "gravity")]
    pub g: f64,
    #[serde(default = "default_alpha")]
    pub alpha: AlphaSpec,
    #[serde(default = "default_fv")]
    pub fv_order: FvOrder,
    #[serde(default = "default_fd")]
    pub fd_order: FdOrder,
    #[serde(default = "default_time")]
    pub time_scheme: TimeScheme,
    #[serde(default = "default_dispersion")]
    pub dispersion: Dispersion,
    #[serde(default = "one")]
    pub cfl: f64,
    pub t_end: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    /// Abort when `max |zeta|` exceeds this multiple of its initial value.
    #[serde(default = "default_instability")]
    pub instability_factor: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub initial: InitialCondition,
}

impl RunConfig {
    pub fn params(&self) -> PhysicalParams {
        PhysicalParams {
            gamma: self.gamma,
            delta: self.delta,
            mu: self.mu,
            epsilon: self.epsilon,
            bo_inv: self.bo_inv,
            g: self.g,
        }
    }

    pub fn scheme(&self) -> Scheme {
        Scheme {
            fv_order: self.fv_order,
            fd_order: self.fd_order,
            time_scheme: self.time_scheme,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.x_min, self.x_max, self.cells).map_err(as_config)
    }

    pub fn control(&self) -> RunControl {
        RunControl {
            t_end: self.t_end,
            snapshot_times: self.snapshot_times.clone(),
            instability_factor: self.instability_factor,
        }
    }

    /// The model with `alpha` resolved.
    pub fn model(&self) -> Result<Model> {
        let p = self.params();
        p.validate().map_err(as_config)?;
        let alpha = self.alpha.resolve(&p).map_err(as_config)?;
        Model::new(p, alpha).map_err(as_config)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.scheme().validate()?;
        self.model()?;
        self.initial.validate().map_err(as_config)?;
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(GnError::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(GnError::Config(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .find(|&&t| !(0.0..=self.t_end).contains(&t))
        {
            return Err(GnError::Config(format!(
                "snapshot time {t} lies outside [0, t_end = {}]",
                self.t_end
            )));
        }
        if !(self.instability_factor > 1.0) {
            return Err(GnError::Config(format!(
                "instability_factor must exceed 1, got {}",
                self.instability_factor
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs always serialize")
    }

    /// Set each `key` (dotted for nested fields, e.g. `initial.a`) to its
    /// value, parsed as JSON when possible and as a string otherwise. The
    /// result is validated once all overrides are applied.
    pub fn with_overrides(&self, overrides: &[(&str, &str)]) -> Result<Self> {
        let mut doc = serde_json::to_value(self).expect("configs always serialize");
        for &(key, value) in overrides {
            let parsed: serde_json::Value = serde_json::from_str(value)
                .unwrap_or_else(|_| serde_json::Value::String(value.into()));
            let mut slot = &mut doc;
            for part in key.split('.') {
                slot = slot
                    .as_object_mut()
                    .ok_or_else(|| GnError::Config(format!("`{key}` does not name a config field")))?
                    .entry(part)
                    .or_insert(serde_json::Value::Null);
            }
            *slot = parsed;
        }
        let cfg: RunConfig =
            serde_json::from_value(doc).map_err(|e| GnError::Config(format!("override: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_override(&self, key: &str, value: &str) -> Result<Self> {
        self.with_overrides(&[(key, value)])
    }
}

fn as_config(e: GnError) -> GnError {
    match e {
        GnError::InvalidParameter(m) => GnError::Config(m),
        e => e,
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(text).map_err(|e| GnError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
