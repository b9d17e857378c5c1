//! Batch execution of a configuration: parallel scenario evaluation, report files and
//! per-scenario radial dumps.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bounds::{self, BoundScenario, Domain, Status, VerificationReport};
use crate::config::{RunConfig, ScenarioSpec};
use crate::error::{Error, Result};
use crate::geometry::WarpingModel;
use crate::isoperimetry::{AifEvaluator, IsoperimetricFunction};
use crate::radial::{self, RadialFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub const DEFAULT_OUTPUT_DIR: &str = "specbound-out";

/// One evaluated scenario.
#[derive(Clone, Debug)]
pub struct ScenarioResult {
    pub report: VerificationReport,
    pub function: Option<RadialFunction>,
}

/// Exit code for a batch: violations take precedence over evaluation failures.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Violated) {
        EXIT_VIOLATION
    } else if reports.iter().any(|r| matches!(r.status, Status::Failed { .. })) {
        EXIT_NUMERIC
    } else {
        EXIT_OK
    }
}

/// Evaluates every scenario, in parallel on `jobs` threads, preserving input order.
/// Errors are limited to building models, profiles and the thread pool; scenario
/// failures become `error` rows.
pub fn evaluate(config: &RunConfig, jobs: Option<usize>) -> Result<Vec<ScenarioResult>> {
    let models = config.build_models().map_err(|e| Error::Config(e.to_string()))?;
    let profiles = config.build_profiles(&models).map_err(|e| match e {
        Error::Config(_) | Error::Io { .. } => e,
        other => Error::Config(other.to_string()),
    })?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs.or(config.jobs) {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let tol = config.tolerance;
    Ok(pool.install(|| {
        config
            .scenarios
            .par_iter()
            .map(|spec| {
                let (report, function) = match evaluate_one(spec, &models, &profiles, tol) {
                    Ok(out) => out,
                    Err(e) => (VerificationReport::failed(spec.check(), &e), None),
                };
                ScenarioResult { report: report.with_scenario(spec.id()).diag("tolerance", tol), function }
            })
            .collect()
    }))
}

fn evaluate_one(
    spec: &ScenarioSpec,
    models: &BTreeMap<String, WarpingModel>,
    profiles: &BTreeMap<String, IsoperimetricFunction>,
    tol: f64,
) -> Result<(VerificationReport, Option<RadialFunction>)> {
    let model = &models[spec.model()];
    let profile = spec.profile().map(|p| &profiles[p]);
    match spec {
        ScenarioSpec::TorsionBound { radius, .. } => {
            let (report, u) = bounds::torsion_bound_check_with_function(model, *radius, profile.unwrap())?;
            Ok((report, Some(u)))
        }
        ScenarioSpec::LinftyBound { p, radius, lambda, constant_scale, .. } => {
            let domain = match (radius, lambda) {
                (Some(r), _) => Domain::Ball { radius: *r },
                (None, Some(l)) => Domain::WholeManifold { lambda: *l },
                (None, None) => return Err(Error::Config("scenario needs radius or lambda".into())),
            };
            let mut scenario = BoundScenario::new(model.clone(), profile.unwrap().clone(), *p, domain)?;
            scenario.tol = tol;
            if let Some(c) = constant_scale {
                scenario.constant_scale = *c;
            }
            let (mut report, u) = bounds::verify_linfty_bound_with_function(&scenario)?;
            if scenario.constant_scale != 1.0 {
                report = report.diag("constant_scale", scenario.constant_scale);
            }
            Ok((report, u))
        }
        ScenarioSpec::LpLowerBound { radius, p, gamma, .. } => {
            let pair = radial::principal_dirichlet_eigenvalue(model, *radius, tol)?;
            let aif = AifEvaluator::new(profile.unwrap().clone())?;
            let report = bounds::lp_lower_bound_check(&pair, *gamma, *p, &aif)?;
            Ok((report, Some(pair.eigenfunction)))
        }
        ScenarioSpec::EnergyIdentity { radius, .. } => {
            let pair = radial::principal_dirichlet_eigenvalue(model, *radius, tol)?;
            let report = bounds::energy_identity_check(&pair)?;
            Ok((report, Some(pair.eigenfunction)))
        }
    }
}

/// Summary of a completed batch.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub reports: Vec<VerificationReport>,
    pub out_dir: PathBuf,
    pub exit_code: i32,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Evaluates the batch and writes `report.json`, `report.csv` and `radial/<id>.csv` into
/// `out_dir`.
pub fn execute(config: &RunConfig, out_dir: &Path, jobs: Option<usize>) -> Result<RunSummary> {
    let results = evaluate(config, jobs)?;
    let radial_dir = out_dir.join("radial");
    fs::create_dir_all(&radial_dir).map_err(io_err(&radial_dir))?;
    for r in &results {
        if let Some(u) = &r.function {
            let path = radial_dir.join(format!("{}.csv", r.report.scenario));
            let file = fs::File::create(&path).map_err(io_err(&path))?;
            u.write_csv(std::io::BufWriter::new(file)).map_err(io_err(&path))?;
        }
    }
    let reports: Vec<VerificationReport> = results.into_iter().map(|r| r.report).collect();

    let json_path = out_dir.join("report.json");
    let file = fs::File::create(&json_path).map_err(io_err(&json_path))?;
    crate::report::write_json(&reports, std::io::BufWriter::new(file)).map_err(io_err(&json_path))?;

    let csv_path = out_dir.join("report.csv");
    let file = fs::File::create(&csv_path).map_err(io_err(&csv_path))?;
    crate::report::write_csv(&reports, std::io::BufWriter::new(file))
        .map_err(|e| Error::Io { path: csv_path.clone(), source: std::io::Error::other(e) })?;

    Ok(RunSummary { exit_code: exit_code(&reports), reports, out_dir: out_dir.to_path_buf() })
}

/// Runs a configuration and maps the outcome to a process exit code.
pub fn run(config: &RunConfig, out_dir: Option<&Path>, jobs: Option<usize>) -> i32 {
    let out_dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
    match execute(config, &out_dir, jobs) {
        Ok(summary) => summary.exit_code,
        Err(e) => {
            eprintln!("specbound: {e}");
            EXIT_CONFIG
        }
    }
}
