//! Built-in benchmark configurations.

use crate::error::{GnError, Result};
use crate::grid::BoundaryCondition;
use crate::hyperbolic::{FvOrder, TimeScheme};
use crate::dispersive::FdOrder;
use crate::model::InitialCondition;
use crate::splitting::Dispersion;

use super::config::{AlphaSpec, RunConfig};

pub const SCENARIOS: [&str; 6] = ["soliton", "collision", "hump", "dam1", "kh", "dam2"];

fn base(id: &str, x_min: f64, x_max: f64, cells: usize, t_end: f64, initial: InitialCondition) -> RunConfig {
    RunConfig {
        scenario: id.to_string(),
        x_min,
        x_max,
        cells,
        bc: BoundaryCondition::Periodic,
        gamma: 0.0,
        delta: 1.0,
        mu: 1.0,
        epsilon: 1.0,
        bo_inv: 0.0,
        g: 9.81,
        alpha: AlphaSpec::Value(1.0),
        fv_order: FvOrder::Weno5,
        fd_order: FdOrder::Df4,
        time_scheme: TimeScheme::Rk4,
        dispersion: Dispersion::Safe,
        cfl: 1.0,
        t_end,
        snapshot_times: Vec::new(),
        instability_factor: 5.0,
        output_dir: None,
        initial,
    }
}

/// Template configuration of a named benchmark.
pub fn scenario(id: &str) -> Result<RunConfig> {
    let cfg = match id {
        "soliton" => RunConfig {
            snapshot_times: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            ..base(
                id,
                0.0,
                200.0,
                1280,
                5.0,
                InitialCondition::Soliton {
                    a: 0.2,
                    d2: 1.0,
                    x0: 20.0,
                },
            )
        },
        "collision" => RunConfig {
            snapshot_times: vec![0.0, 20.0, 25.0, 27.0, 70.0],
            ..base(
                id,
                0.0,
                400.0,
                1200,
                70.0,
                InitialCondition::Collision {
                    a: 0.4,
                    d2: 1.0,
                    x_left: 100.0,
                    x_right: 300.0,
                },
            )
        },
        "hump" => RunConfig {
            snapshot_times: vec![0.0, 10.0, 20.0, 30.0],
            ..base(id, 0.0, 400.0, 2000, 30.0, InitialCondition::Hump { a: 0.4, width: 40.0 })
        },
        "dam1" => RunConfig {
            snapshot_times: vec![0.0, 10.0, 30.0, 65.0],
            ..base(
                id,
                -700.0,
                700.0,
                2800,
                65.0,
                InitialCondition::DamBreak {
                    a: 0.2091,
                    half_width: 250.0,
                },
            )
        },
        "kh" => RunConfig {
            gamma: 0.95,
            delta: 0.5,
            mu: 0.1,
            epsilon: 0.5,
            bo_inv: 5e-5,
            g: 1.0,
            alpha: AlphaSpec::Value(1.271),
            snapshot_times: vec![0.0, 1.0, 2.0, 3.0],
            ..base(id, -4.0, 4.0, 512, 3.0, InitialCondition::Trough { a: -1.0, rate: 4.0 })
        },
        "dam2" => RunConfig {
            gamma: 0.95,
            delta: 0.5,
            bo_inv: 5e-5,
            snapshot_times: vec![0.0, 20.0, 55.0, 75.0],
            ..base(
                id,
                -700.0,
                700.0,
                2800,
                75.0,
                InitialCondition::DamBreak {
                    a: 0.2091,
                    half_width: 250.0,
                },
            )
        },
        other => return Err(GnError::UnknownScenario(other.to_string())),
    };
    Ok(cfg)
}
