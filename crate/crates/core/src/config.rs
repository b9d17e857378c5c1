//! Batch configuration: a versioned JSON document naming models, profiles and scenarios.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::bounds::CheckKind;
use crate::error::{Error, Result};
use crate::geometry::{Curvature, WarpingModel};
use crate::isoperimetry::{IsoperimetricFunction, TabulatedProfile};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const TOLERANCE_ENV: &str = "SPECBOUND_TOL";

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Euclidean { name: String, dimension: u32 },
    Hyperbolic { name: String, dimension: u32, #[serde(default = "one")] kappa: f64 },
    Jacobi {
        name: String,
        dimension: u32,
        curvature: CurvatureSpec,
        #[serde(default)]
        grid_resolution: Option<f64>,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurvatureSpec {
    /// `K = -kappa`.
    Constant { kappa: f64 },
    /// `K(r) = -(a + b·r^exponent)`.
    Power { a: f64, b: f64, exponent: f64 },
}

impl ModelSpec {
    pub fn name(&self) -> &str {
        match self {
            ModelSpec::Euclidean { name, .. }
            | ModelSpec::Hyperbolic { name, .. }
            | ModelSpec::Jacobi { name, .. } => name,
        }
    }

    pub fn build(&self) -> Result<WarpingModel> {
        match self {
            ModelSpec::Euclidean { dimension, .. } => WarpingModel::euclidean(*dimension),
            ModelSpec::Hyperbolic { dimension, kappa, .. } => WarpingModel::hyperbolic(*dimension, *kappa),
            ModelSpec::Jacobi { dimension, curvature, grid_resolution, .. } => {
                let curvature = match *curvature {
                    CurvatureSpec::Constant { kappa } => Curvature::Constant { kappa },
                    CurvatureSpec::Power { a, b, exponent } => Curvature::Power { a, b, exponent },
                };
                WarpingModel::jacobi(*dimension, curvature, *grid_resolution)
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    /// `H(s) = d·s^{1-1/n}`; `d` defaults to `√(4π)` in dimension 2.
    PowerLaw { name: String, dimension: u32, #[serde(default)] d: Option<f64> },
    /// Boundary area of the model ball of the given volume.
    Model { name: String, model: String },
    /// Two-column CSV `s,H`; relative paths resolve against the config file.
    Tabulated { name: String, path: PathBuf },
}

impl ProfileSpec {
    pub fn name(&self) -> &str {
        match self {
            ProfileSpec::PowerLaw { name, .. } | ProfileSpec::Model { name, .. } | ProfileSpec::Tabulated { name, .. } => {
                name
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScenarioSpec {
    TorsionBound { id: String, model: String, profile: String, radius: f64 },
    /// Either `radius` (principal Dirichlet eigenfunction of the ball) or `lambda` (whole
    /// manifold) must be given.
    LinftyBound {
        id: String,
        model: String,
        profile: String,
        p: f64,
        #[serde(default)]
        radius: Option<f64>,
        #[serde(default)]
        lambda: Option<f64>,
        #[serde(default)]
        constant_scale: Option<f64>,
    },
    LpLowerBound {
        id: String,
        model: String,
        profile: String,
        radius: f64,
        p: f64,
        #[serde(default)]
        gamma: f64,
    },
    EnergyIdentity { id: String, model: String, radius: f64 },
}

impl ScenarioSpec {
    pub fn id(&self) -> &str {
        match self {
            ScenarioSpec::TorsionBound { id, .. }
            | ScenarioSpec::LinftyBound { id, .. }
            | ScenarioSpec::LpLowerBound { id, .. }
            | ScenarioSpec::EnergyIdentity { id, .. } => id,
        }
    }

    pub fn check(&self) -> CheckKind {
        match self {
            ScenarioSpec::TorsionBound { .. } => CheckKind::TorsionBound,
            ScenarioSpec::LinftyBound { .. } => CheckKind::LinftyBound,
            ScenarioSpec::LpLowerBound { .. } => CheckKind::LpLowerBound,
            ScenarioSpec::EnergyIdentity { .. } => CheckKind::EnergyIdentity,
        }
    }

    pub fn model(&self) -> &str {
        match self {
            ScenarioSpec::TorsionBound { model, .. }
            | ScenarioSpec::LinftyBound { model, .. }
            | ScenarioSpec::LpLowerBound { model, .. }
            | ScenarioSpec::EnergyIdentity { model, .. } => model,
        }
    }

    pub fn profile(&self) -> Option<&str> {
        match self {
            ScenarioSpec::TorsionBound { profile, .. }
            | ScenarioSpec::LinftyBound { profile, .. }
            | ScenarioSpec::LpLowerBound { profile, .. } => Some(profile),
            ScenarioSpec::EnergyIdentity { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema: u32,
    #[serde(default)]
    output_dir: Option<PathBuf>,
    #[serde(default)]
    tolerance: Option<f64>,
    #[serde(default)]
    jobs: Option<usize>,
    models: Vec<ModelSpec>,
    #[serde(default)]
    profiles: Vec<ProfileSpec>,
    scenarios: Vec<ScenarioSpec>,
}

/// A validated batch configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub models: Vec<ModelSpec>,
    pub profiles: Vec<ProfileSpec>,
    pub scenarios: Vec<ScenarioSpec>,
    /// Output directory from the file, resolved against its location.
    pub output_dir: Option<PathBuf>,
    /// Relative tolerance for eigenvalue and ODE solves.
    pub tolerance: f64,
    pub jobs: Option<usize>,
    /// Directory against which relative table paths resolve.
    pub base_dir: PathBuf,
}

/// Reads and validates a configuration file. The `SPECBOUND_TOL` environment variable,
/// when set, overrides the tolerance.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut config = parse_config_str(&text, &base_dir)?;
    if let Some(tol) = tolerance_from_env()? {
        config.tolerance = tol;
    }
    Ok(config)
}

/// `SPECBOUND_TOL` as a positive number, if set.
pub fn tolerance_from_env() -> Result<Option<f64>> {
    match std::env::var(TOLERANCE_ENV) {
        Ok(v) => {
            let tol: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{TOLERANCE_ENV}={v:?} is not a number")))?;
            check_tolerance(tol, TOLERANCE_ENV)?;
            Ok(Some(tol))
        }
        Err(_) => Ok(None),
    }
}

fn check_tolerance(tol: f64, field: &str) -> Result<()> {
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::Config(format!("{field}: tolerance must lie in (0, 1e-2), got {tol}")));
    }
    Ok(())
}

/// Parses configuration text; `base_dir` anchors relative paths.
pub fn parse_config_str(text: &str, base_dir: &Path) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| {
        Error::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
    })?;
    if raw.schema != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "schema: unsupported version {}, expected {SCHEMA_VERSION}",
            raw.schema
        )));
    }
    let tolerance = raw.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    check_tolerance(tolerance, "tolerance")?;
    if raw.jobs == Some(0) {
        return Err(Error::Config("jobs: must be at least 1".into()));
    }

    let mut model_dims = BTreeMap::new();
    for (i, m) in raw.models.iter().enumerate() {
        let dim = match m {
            ModelSpec::Euclidean { dimension, .. }
            | ModelSpec::Hyperbolic { dimension, .. }
            | ModelSpec::Jacobi { dimension, .. } => *dimension,
        };
        if model_dims.insert(m.name().to_string(), dim).is_some() {
            return Err(Error::Config(format!("models[{i}].name: duplicate model {:?}", m.name())));
        }
        m.build().map_err(|e| Error::Config(format!("models[{i}]: {e}")))?;
    }

    let mut profile_dims: BTreeMap<String, Option<u32>> = BTreeMap::new();
    for (i, p) in raw.profiles.iter().enumerate() {
        let dim = match p {
            ProfileSpec::PowerLaw { dimension, d, .. } => {
                if d.is_none() && IsoperimetricFunction::default_constant(*dimension).is_none() {
                    return Err(Error::Config(format!(
                        "profiles[{i}].d: no default constant in dimension {dimension}; supply d"
                    )));
                }
                if let Some(d) = d {
                    IsoperimetricFunction::power_law(*d, *dimension)
                        .map_err(|e| Error::Config(format!("profiles[{i}]: {e}")))?;
                }
                Some(*dimension)
            }
            ProfileSpec::Model { model, .. } => Some(*model_dims.get(model).ok_or_else(|| {
                Error::Config(format!("profiles[{i}].model: undeclared model {model:?}"))
            })?),
            ProfileSpec::Tabulated { .. } => None,
        };
        if profile_dims.insert(p.name().to_string(), dim).is_some() {
            return Err(Error::Config(format!("profiles[{i}].name: duplicate profile {:?}", p.name())));
        }
    }

    let mut ids = HashSet::new();
    for (i, s) in raw.scenarios.iter().enumerate() {
        let at = |field: &str| format!("scenarios[{i}].{field}");
        if s.id().is_empty() || !s.id().chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return Err(Error::Config(format!(
                "{}: {:?} must be non-empty and use only letters, digits, '-', '_' or '.'",
                at("id"),
                s.id()
            )));
        }
        if !ids.insert(s.id().to_string()) {
            return Err(Error::Config(format!("{}: duplicate scenario id {:?}", at("id"), s.id())));
        }
        let model_dim = *model_dims
            .get(s.model())
            .ok_or_else(|| Error::Config(format!("{}: undeclared model {:?}", at("model"), s.model())))?;
        if let Some(profile) = s.profile() {
            let dim = profile_dims
                .get(profile)
                .ok_or_else(|| Error::Config(format!("{}: undeclared profile {profile:?}", at("profile"))))?;
            if let Some(d) = dim {
                if *d != model_dim {
                    return Err(Error::Config(format!(
                        "{}: profile {profile:?} has dimension {d} but model {:?} has dimension {model_dim}",
                        at("profile"),
                        s.model()
                    )));
                }
            }
        }
        let positive = |v: f64, field: &str| -> Result<()> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{}: must be positive, got {v}", at(field))))
            }
        };
        let exponent = |p: f64| -> Result<()> {
            if p >= 2.0 && p.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{}: must be at least 2, got {p}", at("p"))))
            }
        };
        match s {
            ScenarioSpec::TorsionBound { radius, .. } | ScenarioSpec::EnergyIdentity { radius, .. } => {
                positive(*radius, "radius")?
            }
            ScenarioSpec::LinftyBound { p, radius, lambda, constant_scale, .. } => {
                exponent(*p)?;
                match (radius, lambda) {
                    (Some(r), None) => positive(*r, "radius")?,
                    (None, Some(l)) => positive(*l, "lambda")?,
                    _ => {
                        return Err(Error::Config(format!(
                            "{}: give exactly one of radius (ball) or lambda (whole manifold)",
                            at("radius")
                        )))
                    }
                }
                if let Some(c) = constant_scale {
                    positive(*c, "constant_scale")?;
                }
            }
            ScenarioSpec::LpLowerBound { radius, p, gamma, .. } => {
                positive(*radius, "radius")?;
                exponent(*p)?;
                if !(*gamma >= 0.0 && gamma.is_finite()) {
                    return Err(Error::Config(format!("{}: must be nonnegative, got {gamma}", at("gamma"))));
                }
            }
        }
    }

    Ok(RunConfig {
        models: raw.models,
        profiles: raw.profiles,
        scenarios: raw.scenarios,
        output_dir: raw.output_dir.map(|d| base_dir.join(d)),
        tolerance,
        jobs: raw.jobs,
        base_dir: base_dir.to_path_buf(),
    })
}

impl RunConfig {
    pub fn model_spec(&self, name: &str) -> Option<&ModelSpec> {
        self.models.iter().find(|m| m.name() == name)
    }

    pub fn profile_spec(&self, name: &str) -> Option<&ProfileSpec> {
        self.profiles.iter().find(|p| p.name() == name)
    }

    /// Builds every model, keyed by name.
    pub fn build_models(&self) -> Result<BTreeMap<String, WarpingModel>> {
        self.models.iter().map(|m| Ok((m.name().to_string(), m.build()?))).collect()
    }

    /// Builds every profile, loading tables from disk.
    pub fn build_profiles(
        &self,
        models: &BTreeMap<String, WarpingModel>,
    ) -> Result<BTreeMap<String, IsoperimetricFunction>> {
        self.profiles
            .iter()
            .map(|p| {
                let f = match p {
                    ProfileSpec::PowerLaw { dimension, d, .. } => {
                        let d = d
                            .or_else(|| IsoperimetricFunction::default_constant(*dimension))
                            .ok_or_else(|| Error::Config(format!("profile {:?} needs d", p.name())))?;
                        IsoperimetricFunction::power_law(d, *dimension)?
                    }
                    ProfileSpec::Model { model, .. } => IsoperimetricFunction::model_profile(
                        models
                            .get(model)
                            .cloned()
                            .ok_or_else(|| Error::Config(format!("undeclared model {model:?}")))?,
                    ),
                    ProfileSpec::Tabulated { path, .. } => {
                        IsoperimetricFunction::tabulated(TabulatedProfile::from_csv_path(&self.base_dir.join(path))?)
                    }
                };
                Ok((p.name().to_string(), f))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "schema": 1,
        "models": [{"name": "plane", "kind": "euclidean", "dimension": 2}],
        "profiles": [{"name": "planar", "kind": "power_law", "dimension": 2}],
        "scenarios": [{"id": "t1", "check": "torsion_bound", "model": "plane", "profile": "planar", "radius": 1.0}]
    }"#;

    fn err(text: &str) -> String {
        parse_config_str(text, Path::new(".")).unwrap_err().to_string()
    }

    #[test]
    fn minimal_config() {
        let c = parse_config_str(MINIMAL, Path::new(".")).unwrap();
        assert_eq!(c.scenarios.len(), 1);
        assert_eq!(c.scenarios[0].check(), CheckKind::TorsionBound);
        assert_eq!(c.tolerance, DEFAULT_TOLERANCE);
        let models = c.build_models().unwrap();
        assert!(c.build_profiles(&models).is_ok());
    }

    #[test]
    fn dangling_profile_is_named() {
        let text = MINIMAL.replace(r#""profile": "planar""#, r#""profile": "croke3""#);
        let e = err(&text);
        assert!(e.contains("croke3") && e.contains("scenarios[0].profile"), "{e}");
    }

    #[test]
    fn exponent_below_two_is_rejected() {
        let text = MINIMAL.replace(
            r#"{"id": "t1", "check": "torsion_bound", "model": "plane", "profile": "planar", "radius": 1.0}"#,
            r#"{"id": "w", "check": "linfty_bound", "model": "plane", "profile": "planar", "radius": 1.0, "p": 1.5}"#,
        );
        let e = err(&text);
        assert!(e.contains("scenarios[0].p"), "{e}");
    }

    #[test]
    fn unknown_keys_and_syntax_errors_carry_positions() {
        let e = err(&MINIMAL.replace(r#""schema": 1,"#, r#""schema": 1, "extra": true,"#));
        assert!(e.contains("line") && e.contains("extra"), "{e}");
        let e = err("{\n  \"schema\": 1,\n  oops\n}");
        assert!(e.contains("line 3"), "{e}");
    }

    #[test]
    fn linfty_needs_one_domain() {
        let text = MINIMAL.replace(
            r#""radius": 1.0}"#,
            r#""radius": 1.0, "lambda": 0.1, "p": 3}"#,
        ).replace("torsion_bound", "linfty_bound");
        assert!(err(&text).contains("exactly one"));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let text = MINIMAL.replace(
            r#"{"name": "planar", "kind": "power_law", "dimension": 2}"#,
            r#"{"name": "planar", "kind": "power_law", "dimension": 3, "d": 4.0}"#,
        );
        let e = err(&text);
        assert!(e.contains("has dimension 3"), "{e}");
    }
}
