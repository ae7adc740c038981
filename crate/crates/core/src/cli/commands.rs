//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{alpha_opt, phase_velocity_ratio, stability_w2, w2_fe, w2_gn, Background, StabilityVariant};
use crate::error::{GnError, Result};
use crate::model::{Model, PhysicalParams};

use super::config::{parse_config, RunConfig};
use super::output::write_json;
use super::scenario::scenario;
use super::sweep::{convergence_sweep, scheme_by_name, table_csv};
use super::{run_to_dir, FailureReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gnwave", version, about = "Green-Naghdi internal-wave solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a simulation described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run (or print) a built-in scenario.
    Scenario {
        /// soliton, collision, hump, dam1, kh or dam2
        id: String,
        /// Replace a config field, e.g. `cells=640` or `initial.a=0.3`.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the resolved config and exit without running.
        #[arg(long)]
        print_config: bool,
    },
    /// Mesh-refinement errors of the solitary wave at `t_end`.
    Sweep {
        #[arg(long, default_value = "soliton")]
        scenario: String,
        #[arg(long, value_delimiter = ',', default_value = "fv1,muscl,weno5")]
        schemes: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "80,160,320,640,1280")]
        cells: Vec<usize>,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal alpha and phase-velocity ratios over `k in (0, kmax]`.
    Dispersion {
        /// `one_layer`, `two_layer`, or `key=value,...` over
        /// gamma, delta, mu, bo_inv.
        #[arg(long, default_value = "one_layer")]
        params: String,
        /// Alpha used for the model curve.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 4.0)]
        kmax: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stability relation `w^2(k)` about a constant background.
    Stability {
        /// safe_1layer, naive_1layer, safe_2layer or naive_2layer
        #[arg(long)]
        variant: String,
        #[arg(long)]
        params: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Background interface deformation.
        #[arg(long, default_value_t = 0.0)]
        zeta: f64,
        /// Background shear velocity.
        #[arg(long, default_value_t = 0.0)]
        v: f64,
        #[arg(long, default_value_t = 50.0)]
        kmax: f64,
        #[arg(long, default_value_t = 400)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `one_layer`, `two_layer` or a `key=value` list into dimensionless
/// parameters with `epsilon = g = 1`.
pub fn parse_params(spec: &str) -> Result<PhysicalParams> {
    let mut p = PhysicalParams {
        gamma: 0.0,
        delta: 1.0,
        mu: 1.0,
        epsilon: 1.0,
        bo_inv: 0.0,
        g: 1.0,
    };
    match spec.trim() {
        "one_layer" => {}
        "two_layer" => {
            p.gamma = 0.95;
            p.delta = 0.5;
            p.bo_inv = 5e-5;
        }
        list => {
            for item in list.split(',').filter(|s| !s.trim().is_empty()) {
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| GnError::Config(format!("expected key=value, got `{item}`")))?;
                let value: f64 = value
                    .trim()
                    .parse()
                    .map_err(|_| GnError::Config(format!("`{item}`: value is not a number")))?;
                match key.trim() {
                    "gamma" => p.gamma = value,
                    "delta" => p.delta = value,
                    "mu" => p.mu = value,
                    "epsilon" => p.epsilon = value,
                    "bo_inv" => p.bo_inv = value,
                    "g" => p.g = value,
                    other => return Err(GnError::Config(format!("unknown parameter `{other}`"))),
                }
            }
        }
    }
    p.validate().map_err(to_config)?;
    Ok(p)
}

fn to_config(e: GnError) -> GnError {
    match e {
        GnError::InvalidParameter(m) => GnError::Config(m),
        e => e,
    }
}

fn sample_k(kmax: f64, samples: usize) -> Result<Vec<f64>> {
    if !(kmax > 0.0) || samples == 0 {
        return Err(GnError::Config("kmax must be positive and samples nonzero".into()));
    }
    Ok((1..=samples).map(|i| kmax * i as f64 / samples as f64).collect())
}

fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| GnError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| GnError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// CSV of `k, alpha_opt, w2_fe, w2_gn, phase ratio at alpha = 1, phase
/// ratio at the requested alpha`.
pub fn dispersion_table(p: &PhysicalParams, alpha: f64, kmax: f64, samples: usize) -> Result<String> {
    let model = Model::new(*p, alpha).map_err(to_config)?;
    let plain = Model::new(*p, 1.0).map_err(to_config)?;
    let mut out = String::from("k,alpha_opt,w2_fe,w2_gn,phase_ratio_alpha1,phase_ratio\n");
    for k in sample_k(kmax, samples)? {
        let a = match alpha_opt(k, p) {
            Ok(a) => format!("{a:.12e}"),
            Err(GnError::AlphaPole { .. }) => "nan".into(),
            Err(e) => return Err(e),
        };
        out.push_str(&format!(
            "{k:.12e},{a},{:.12e},{:.12e},{:.12e},{:.12e}\n",
            w2_fe(k, p),
            w2_gn(k, &model),
            phase_velocity_ratio(k, &plain),
            phase_velocity_ratio(k, &model)
        ));
    }
    Ok(out)
}

pub fn parse_variant(name: &str) -> Result<StabilityVariant> {
    serde_json::from_value(serde_json::Value::String(name.to_string())).map_err(|_| {
        GnError::Config(format!(
            "unknown variant `{name}` (expected safe_1layer, naive_1layer, safe_2layer or naive_2layer)"
        ))
    })
}

/// CSV of `k, w2, advection_shift`.
pub fn stability_table(
    variant: StabilityVariant,
    p: &PhysicalParams,
    alpha: f64,
    bg: Background,
    kmax: f64,
    samples: usize,
) -> Result<String> {
    let model = Model::new(*p, alpha).map_err(to_config)?;
    let mut out = String::from("k,w2,advection_shift\n");
    for k in sample_k(kmax, samples)? {
        let s = stability_w2(k, bg, &model, variant).map_err(to_config)?;
        out.push_str(&format!("{k:.12e},{:.12e},{:.12e}\n", s.w2, s.advection_shift));
    }
    Ok(out)
}

fn run_config(cfg: &RunConfig, out: Option<PathBuf>) -> Result<()> {
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(format!("out_{}", cfg.scenario)));
    match run_to_dir(cfg, &dir) {
        Ok(exec) => {
            let last = exec.run.snapshots.last().map(|s| s.t).unwrap_or(0.0);
            eprintln!(
                "{}: {} steps to t = {last}, {} snapshots in {}",
                cfg.scenario,
                exec.run.history.len(),
                exec.run.snapshots.len(),
                dir.display()
            );
            Ok(())
        }
        Err(e) if e.is_numerical() => {
            let report = FailureReport::new(&cfg.scenario, &e);
            if fs::create_dir_all(&dir).is_ok() {
                let _ = write_json(&dir.join("failure.json"), &report);
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("reports always serialize")
            );
            Err(e)
        }
        Err(e) => Err(e),
    }
}

pub fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out } => {
            let text = fs::read_to_string(&config).map_err(|source| GnError::Io {
                path: config.clone(),
                source,
            })?;
            let cfg = parse_config(&text)
                .map_err(|e| GnError::Config(format!("{}: {e}", config.display())))?;
            run_config(&cfg, out)
        }
        Command::Scenario {
            id,
            overrides,
            out,
            print_config,
        } => {
            let pairs = overrides
                .iter()
                .map(|o| {
                    o.split_once('=')
                        .map(|(k, v)| (k.trim(), v.trim()))
                        .ok_or_else(|| GnError::Config(format!("expected KEY=VALUE, got `{o}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            let cfg = scenario(&id)?.with_overrides(&pairs)?;
            if print_config {
                println!("{}", cfg.to_json());
                return Ok(());
            }
            run_config(&cfg, out)
        }
        Command::Sweep {
            scenario: id,
            schemes,
            cells,
            out,
        } => {
            let base = scenario(&id)?;
            let schemes = schemes
                .iter()
                .map(|s| scheme_by_name(s))
                .collect::<Result<Vec<_>>>()?;
            let rows = convergence_sweep(&base, &schemes, &cells)?;
            emit_text(&table_csv(&rows, &schemes), out.as_deref())
        }
        Command::Dispersion {
            params,
            alpha,
            kmax,
            samples,
            out,
        } => {
            let p = parse_params(&params)?;
            emit_text(&dispersion_table(&p, alpha, kmax, samples)?, out.as_deref())
        }
        Command::Stability {
            variant,
            params,
            alpha,
            zeta,
            v,
            kmax,
            samples,
            out,
        } => {
            let variant = parse_variant(&variant)?;
            let default = if variant.is_one_layer() { "one_layer" } else { "two_layer" };
            let p = parse_params(params.as_deref().unwrap_or(default))?;
            let table = stability_table(variant, &p, alpha, Background { zeta, v }, kmax, samples)?;
            emit_text(&table, out.as_deref())
        }
    }
}

pub fn exit_code(e: &GnError) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else if matches!(e, GnError::Io { .. }) {
        EXIT_IO
    } else {
        EXIT_CONFIG
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
