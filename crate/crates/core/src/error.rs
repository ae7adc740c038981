use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, GnError>;

#[derive(Debug, Error)]
pub enum GnError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vanishing layer depth (h1 = {h1}, h2 = {h2})")]
    DegenerateDepth { h1: f64, h2: f64 },

    #[error("loss of strict hyperbolicity at interface {index}: zeta = {zeta}, v = {v}")]
    HyperbolicityLoss { index: usize, zeta: f64, v: f64 },

    #[error("all wave speeds vanish, the CFL time step is undefined")]
    ZeroWaveSpeed,

    #[error("instability detector fired at t = {t}: max|zeta| = {max_abs_zeta} exceeds {limit}")]
    Instability { t: f64, max_abs_zeta: f64, limit: f64 },

    #[error("non-finite value in the solution at t = {t}")]
    NonFinite { t: f64 },

    #[error("alpha_opt is undefined at k = {k} (dispersion ratio equals 1)")]
    AlphaPole { k: f64 },

    #[error("reference field has zero norm")]
    ZeroReferenceNorm,

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<GnError>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl GnError {
    /// True for failures of the numerics (as opposed to bad input or I/O).
    pub fn is_numerical(&self) -> bool {
        match self {
            GnError::DegenerateDepth { .. }
            | GnError::HyperbolicityLoss { .. }
            | GnError::ZeroWaveSpeed
            | GnError::Instability { .. }
            | GnError::NonFinite { .. }
            | GnError::AlphaPole { .. }
            | GnError::ZeroReferenceNorm => true,
            GnError::AtTime { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn at_time(self, t: f64) -> Self {
        match self {
            e @ GnError::AtTime { .. } => e,
            e @ GnError::Instability { .. } => e,
            e @ GnError::NonFinite { .. } => e,
            e => GnError::AtTime {
                t,
                source: Box::new(e),
            },
        }
    }
}
