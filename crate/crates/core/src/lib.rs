//! Hyperbolic/dispersive splitting solver for the improved Green-Naghdi
//! equations describing internal waves in one- and two-layer flows over a
//! flat bottom, with the linear dispersion and stability analysis used to
//! tune the dispersion parameter.

pub mod analysis;
pub mod banded;
pub mod cli;
pub mod dispersive;
pub mod error;
pub mod grid;
pub mod hyperbolic;
pub mod model;
pub mod splitting;

pub use error::{GnError, Result};
