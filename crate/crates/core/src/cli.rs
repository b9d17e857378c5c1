//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::bounds;
use crate::config::{self, RunConfig, DEFAULT_TOLERANCE};
use crate::error::{Error, Result};
use crate::format::{round12, sig12};
use crate::geometry::WarpingModel;
use crate::isoperimetry::{IsoperimetricFunction, TabulatedProfile};
use crate::radial;
use crate::report;
use crate::runner::{self, EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "specbound", version, about = "L∞ bounds for eigenfunctions on rotationally symmetric models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every scenario of a configuration file and write reports.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir`, then `specbound-out`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the power-law bound constant 2(nλ)^{n/2p}/D^{n/p} as JSON.
    Constant {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        dim: u32,
        #[arg(long = "D")]
        d: f64,
    },
    /// Print the principal Dirichlet eigenvalue of a geodesic ball.
    Eigen {
        /// `euclidean:N`, `hyperbolic:N[:KAPPA]`, or a model name from `--config`.
        #[arg(long)]
        model: String,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate the torsion bound on one ball and print the report row as JSON.
    Torsion {
        #[arg(long)]
        model: String,
        #[arg(long)]
        radius: f64,
        /// `model`, `power:N` (default constant), `power:D:N`, `tabulated:PATH`, or a profile
        /// name from `--config`.
        #[arg(long)]
        profile: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Resolves a model argument: a builtin `kind:args` string or a name declared in `config`.
pub fn resolve_model(arg: &str, config: Option<&RunConfig>) -> Result<WarpingModel> {
    if let Some(spec) = config.and_then(|c| c.model_spec(arg)) {
        return spec.build();
    }
    let parts: Vec<&str> = arg.split(':').collect();
    let dim = |s: &str| -> Result<u32> {
        s.parse().map_err(|_| Error::Config(format!("model {arg:?}: bad dimension {s:?}")))
    };
    match parts.as_slice() {
        ["euclidean", n] => WarpingModel::euclidean(dim(n)?),
        ["hyperbolic", n] => WarpingModel::hyperbolic(dim(n)?, 1.0),
        ["hyperbolic", n, k] => WarpingModel::hyperbolic(
            dim(n)?,
            k.parse().map_err(|_| Error::Config(format!("model {arg:?}: bad curvature {k:?}")))?,
        ),
        _ => Err(Error::Config(format!(
            "unknown model {arg:?}; use euclidean:N, hyperbolic:N[:KAPPA] or a name from --config"
        ))),
    }
}

/// Resolves a profile argument relative to the already resolved model.
pub fn resolve_profile(arg: &str, model: &WarpingModel, config: Option<&RunConfig>) -> Result<IsoperimetricFunction> {
    if let Some(c) = config {
        if c.profile_spec(arg).is_some() {
            let models = c.build_models()?;
            let mut profiles = c.build_profiles(&models)?;
            return Ok(profiles.remove(arg).unwrap());
        }
    }
    let bad = || Error::Config(format!("profile {arg:?}: expected model, power:N, power:D:N or tabulated:PATH"));
    if arg == "model" {
        return Ok(IsoperimetricFunction::model_profile(model.clone()));
    }
    if let Some(path) = arg.strip_prefix("tabulated:") {
        return Ok(IsoperimetricFunction::tabulated(TabulatedProfile::from_csv_path(Path::new(path))?));
    }
    let parts: Vec<&str> = arg.split(':').collect();
    match parts.as_slice() {
        ["power", n] => {
            let n: u32 = n.parse().map_err(|_| bad())?;
            let d = IsoperimetricFunction::default_constant(n)
                .ok_or_else(|| Error::Config(format!("profile {arg:?}: no default constant in dimension {n}")))?;
            IsoperimetricFunction::power_law(d, n)
        }
        ["power", d, n] => IsoperimetricFunction::power_law(d.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?),
        _ => Err(bad()),
    }
}

fn global_tolerance() -> Result<f64> {
    Ok(config::tolerance_from_env()?.unwrap_or(DEFAULT_TOLERANCE))
}

fn load_optional(path: &Option<PathBuf>) -> Result<Option<RunConfig>> {
    path.as_deref().map(config::parse_config).transpose()
}

fn failure_code(e: &Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_CONFIG
    }
}

/// Runs a parsed command, writing results to `out`; returns the process exit code.
pub fn execute<W: Write>(cli: Cli, out: &mut W) -> i32 {
    let result = match cli.command {
        Command::Run { config, out: dir, jobs } => {
            return match config::parse_config(&config) {
                Ok(cfg) => runner::run(&cfg, dir.as_deref(), jobs),
                Err(e) => {
                    eprintln!("specbound: {e}");
                    EXIT_CONFIG
                }
            };
        }
        Command::Constant { lambda, p, dim, d } => bounds::hadamard_constant(lambda, p, dim, d).map(|c| {
            let v = json!({"lambda": lambda, "p": p, "dim": dim, "D": d, "constant": round12(c)});
            (v.to_string(), EXIT_OK)
        }),
        Command::Eigen { model, radius, config } => (|| {
            let cfg = load_optional(&config)?;
            let model = resolve_model(&model, cfg.as_ref())?;
            let pair = radial::principal_dirichlet_eigenvalue(&model, radius, global_tolerance()?)?;
            Ok((sig12(pair.eigenvalue), EXIT_OK))
        })(),
        Command::Torsion { model, radius, profile, config } => (|| {
            let cfg = load_optional(&config)?;
            let model_name = model;
            let model = resolve_model(&model_name, cfg.as_ref())?;
            let profile = resolve_profile(&profile, &model, cfg.as_ref())?;
            let r = bounds::torsion_bound_check(&model, radius, &profile)?.with_scenario(model_name);
            let code = runner::exit_code(std::slice::from_ref(&r));
            Ok((report::report_json(&r).to_string(), code))
        })(),
    };
    match result {
        Ok((text, code)) => {
            if writeln!(out, "{text}").is_err() {
                return EXIT_CONFIG;
            }
            code
        }
        Err(e) => {
            eprintln!("specbound: {e}");
            failure_code(&e)
        }
    }
}
