//! Bound constants and the inequality checks built on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::WarpingModel;
use crate::isoperimetry::{AifEvaluator, IsoperimetricFunction};
use crate::radial::{self, DirichletEigenpair, LpNorm, RadialFunction};

/// Relative margin granted to every non-strict inequality.
pub const MARGIN: f64 = 1e-6;
/// Relative tolerance of the energy identity.
pub const ENERGY_RTOL: f64 = 1e-5;

/// `C(λ, p, H) = 2·(H_a⁻¹(1/(2λ)))^{-1/p}`.
pub fn eigen_bound_constant(lambda: f64, p: f64, aif: &AifEvaluator) -> Result<f64> {
    check_lambda_p(lambda, p)?;
    let base = aif.inverse(1.0 / (2.0 * lambda))?;
    Ok(2.0 * base.powf(-1.0 / p))
}

/// Closed form `2(nλ)^{n/(2p)} / D^{n/p}` of the constant for a power-law profile.
pub fn hadamard_constant(lambda: f64, p: f64, n: u32, d: f64) -> Result<f64> {
    check_lambda_p(lambda, p)?;
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain(format!("isoperimetric constant must be positive, got {d}")));
    }
    let n = n as f64;
    Ok(2.0 * (n * lambda).powf(n / (2.0 * p)) / d.powf(n / p))
}

fn check_lambda_p(lambda: f64, p: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p must be at least 2, got {p}")));
    }
    Ok(())
}

/// `2/√(1 - λ/λ₁)`; `f64::INFINITY` when `λ = λ₁`.
pub fn admissible_p_threshold(lambda: f64, lambda1: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(lambda1 > 0.0) {
        return Err(Error::Domain(format!("need 0 < λ and 0 < λ₁, got λ = {lambda}, λ₁ = {lambda1}")));
    }
    if lambda > lambda1 {
        return Err(Error::Domain(format!("λ = {lambda} exceeds λ₁ = {lambda1}")));
    }
    if lambda == lambda1 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 / (1.0 - lambda / lambda1).sqrt())
}

/// Where a scenario's eigenfunction lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    /// Geodesic ball; the eigenfunction is the principal Dirichlet one.
    Ball { radius: f64 },
    /// The whole model; the eigenfunction is the regular radial solution for a given `λ`.
    WholeManifold { lambda: f64 },
}

/// Inputs of the L∞ bound check.
#[derive(Clone, Debug)]
pub struct BoundScenario {
    pub model: WarpingModel,
    pub profile: IsoperimetricFunction,
    pub p: f64,
    pub domain: Domain,
    /// Multiplies the computed constant; 1 except when deliberately breaking the bound.
    pub constant_scale: f64,
    /// Relative tolerance for eigenvalue and ODE solves.
    pub tol: f64,
}

impl BoundScenario {
    pub fn new(model: WarpingModel, profile: IsoperimetricFunction, p: f64, domain: Domain) -> Result<Self> {
        if !(p >= 2.0) || !p.is_finite() {
            return Err(Error::Domain(format!("p must be at least 2, got {p}")));
        }
        match domain {
            Domain::Ball { radius } if !(radius > 0.0 && radius.is_finite()) => {
                return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
            }
            Domain::WholeManifold { lambda } if !(lambda > 0.0 && lambda.is_finite()) => {
                return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
            }
            _ => {}
        }
        Ok(BoundScenario { model, profile, p, domain, constant_scale: 1.0, tol: 1e-10 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckKind {
    TorsionBound,
    LinftyBound,
    LpLowerBound,
    EnergyIdentity,
}

impl CheckKind {
    pub const ALL: [CheckKind; 4] =
        [CheckKind::TorsionBound, CheckKind::LinftyBound, CheckKind::LpLowerBound, CheckKind::EnergyIdentity];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::TorsionBound => "torsion_bound",
            CheckKind::LinftyBound => "linfty_bound",
            CheckKind::LpLowerBound => "lp_lower_bound",
            CheckKind::EnergyIdentity => "energy_identity",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// How `lhs` and `rhs` are compared, which also fixes the slack ratio.
    pub fn orientation(self) -> Orientation {
        match self {
            CheckKind::TorsionBound | CheckKind::LinftyBound => Orientation::AtMost,
            CheckKind::LpLowerBound => Orientation::AtLeast,
            CheckKind::EnergyIdentity => Orientation::Equal,
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `AtMost`: `lhs ≤ rhs`, slack `rhs/lhs`. `AtLeast`: `lhs ≥ rhs`, slack `lhs/rhs`.
/// `Equal`: `|lhs - rhs| ≤ 1e-5·rhs`, slack `lhs/rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    AtMost,
    AtLeast,
    Equal,
}

impl Orientation {
    pub fn symbol(self) -> &'static str {
        match self {
            Orientation::AtMost => "<=",
            Orientation::AtLeast => ">=",
            Orientation::Equal => "==",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Satisfied,
    Violated,
    NotApplicable(String),
    /// The check could not be evaluated; `numeric` separates solver failures from bad input.
    Failed { reason: String, numeric: bool },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::NotApplicable(_) => "not_applicable",
            Status::Failed { .. } => "error",
        }
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Status::NotApplicable(r) | Status::Failed { reason: r, .. } => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    Number(f64),
    Flag(bool),
    Text(String),
}

impl From<f64> for Diagnostic {
    fn from(v: f64) -> Self {
        Diagnostic::Number(v)
    }
}

impl From<bool> for Diagnostic {
    fn from(v: bool) -> Self {
        Diagnostic::Flag(v)
    }
}

impl From<&str> for Diagnostic {
    fn from(v: &str) -> Self {
        Diagnostic::Text(v.to_string())
    }
}

impl From<String> for Diagnostic {
    fn from(v: String) -> Self {
        Diagnostic::Text(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub scenario: String,
    pub check: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub status: Status,
    pub diagnostics: BTreeMap<String, Diagnostic>,
}

impl VerificationReport {
    /// Compares `lhs` with `rhs` according to the check's orientation.
    pub fn evaluate(check: CheckKind, lhs: f64, rhs: f64) -> Self {
        let (slack, ok) = match check.orientation() {
            Orientation::AtMost => {
                let slack = rhs / lhs;
                (slack, lhs <= rhs + MARGIN * rhs.abs().max(lhs.abs()))
            }
            Orientation::AtLeast => {
                let slack = lhs / rhs;
                (slack, lhs >= rhs - MARGIN * rhs.abs().max(lhs.abs()))
            }
            Orientation::Equal => (lhs / rhs, (lhs - rhs).abs() <= ENERGY_RTOL * rhs.abs()),
        };
        let status = if !(lhs.is_finite() && rhs.is_finite()) {
            Status::Failed { reason: "non-finite side in comparison".into(), numeric: true }
        } else if ok {
            Status::Satisfied
        } else {
            Status::Violated
        };
        VerificationReport {
            scenario: String::new(),
            check,
            lhs,
            rhs,
            slack,
            status,
            diagnostics: BTreeMap::new(),
        }
    }

    /// A row for a check that does not apply; sides are NaN.
    pub fn not_applicable(check: CheckKind, reason: impl Into<String>) -> Self {
        VerificationReport {
            scenario: String::new(),
            check,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            status: Status::NotApplicable(reason.into()),
            diagnostics: BTreeMap::new(),
        }
    }

    /// A row for a check whose evaluation raised an error.
    pub fn failed(check: CheckKind, err: &Error) -> Self {
        VerificationReport {
            scenario: String::new(),
            check,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            status: Status::Failed { reason: err.to_string(), numeric: err.is_numeric() },
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with_scenario(mut self, id: impl Into<String>) -> Self {
        self.scenario = id.into();
        self
    }

    pub fn diag(mut self, key: &str, value: impl Into<Diagnostic>) -> Self {
        self.diagnostics.insert(key.to_string(), value.into());
        self
    }

    pub fn is_satisfied(&self) -> bool {
        self.status == Status::Satisfied
    }

    pub fn is_violated(&self) -> bool {
        self.status == Status::Violated
    }
}

/// Torsion bound `sup u ≤ H_a(|B_R|)` for the torsion function of a geodesic ball.
pub fn torsion_bound_check(model: &WarpingModel, radius: f64, profile: &IsoperimetricFunction) -> Result<VerificationReport> {
    torsion_bound_check_with_function(model, radius, profile).map(|(r, _)| r)
}

/// As [`torsion_bound_check`], also returning the torsion function.
pub fn torsion_bound_check_with_function(
    model: &WarpingModel,
    radius: f64,
    profile: &IsoperimetricFunction,
) -> Result<(VerificationReport, RadialFunction)> {
    let u = radial::solve_torsion(model, radius)?;
    let volume = model.ball_volume(radius)?;
    let aif = AifEvaluator::new(profile.clone())?;
    let rhs = aif.eval(volume)?;
    let report = VerificationReport::evaluate(CheckKind::TorsionBound, u.sup_norm(), rhs)
        .diag("radius", radius)
        .diag("ball_volume", volume)
        .diag("profile", profile.to_string());
    Ok((report, u))
}

/// Lower bound `‖w‖_p^p ≥ ((‖w‖_∞+γ)/2)^p · H_a⁻¹((‖w‖_∞-γ)/(2λ‖w‖_∞))` for a Dirichlet
/// eigenpair and boundary datum `γ`.
pub fn lp_lower_bound_check(
    pair: &DirichletEigenpair,
    gamma: f64,
    p: f64,
    aif: &AifEvaluator,
) -> Result<VerificationReport> {
    check_lambda_p(pair.eigenvalue, p)?;
    let w = &pair.eigenfunction;
    let sup = w.sup_norm();
    if !(gamma >= 0.0) || gamma >= sup {
        return Err(Error::Precondition(format!(
            "boundary datum γ = {gamma} must lie in [0, ‖w‖_∞ = {sup})"
        )));
    }
    let lhs = w.lp_integral(p, pair.radius)?;
    let base = aif.inverse((sup - gamma) / (2.0 * pair.eigenvalue * sup))?;
    let rhs = ((sup + gamma) / 2.0).powf(p) * base;
    Ok(VerificationReport::evaluate(CheckKind::LpLowerBound, lhs, rhs)
        .diag("lambda", pair.eigenvalue)
        .diag("radius", pair.radius)
        .diag("gamma", gamma)
        .diag("p", p)
        .diag("sup_norm", sup))
}

/// Energy identity `∫|∇u|² = λ∫u²` for a Dirichlet eigenpair, in radial form.
pub fn energy_identity_check(pair: &DirichletEigenpair) -> Result<VerificationReport> {
    let w = &pair.eigenfunction;
    if w.sup_norm() == 0.0 {
        return Err(Error::Precondition("eigenfunction is identically zero".into()));
    }
    let lhs = w.weighted_integral(|_, du| du * du, pair.radius)?;
    let rhs = pair.eigenvalue * w.weighted_integral(|u, _| u * u, pair.radius)?;
    Ok(VerificationReport::evaluate(CheckKind::EnergyIdentity, lhs, rhs)
        .diag("lambda", pair.eigenvalue)
        .diag("radius", pair.radius))
}

/// `‖w‖_∞ ≤ C(λ, p, H)·‖w‖_p`. Ball domains use the principal Dirichlet eigenfunction; whole
/// manifolds use the regular radial solution and report NOT-APPLICABLE when `λ` exceeds
/// the spectrum bottom, `p` is not above the admissible threshold, or the norm diverges.
pub fn verify_linfty_bound(scenario: &BoundScenario) -> Result<VerificationReport> {
    verify_linfty_bound_with_function(scenario).map(|(r, _)| r)
}

/// As [`verify_linfty_bound`], also returning the eigenfunction when one was computed.
pub fn verify_linfty_bound_with_function(
    scenario: &BoundScenario,
) -> Result<(VerificationReport, Option<RadialFunction>)> {
    let check = CheckKind::LinftyBound;
    let aif = AifEvaluator::new(scenario.profile.clone())?;
    let p = scenario.p;
    match scenario.domain {
        Domain::Ball { radius } => {
            let pair = radial::principal_dirichlet_eigenvalue(&scenario.model, radius, scenario.tol)?;
            let c = scenario.constant_scale * eigen_bound_constant(pair.eigenvalue, p, &aif)?;
            let w = &pair.eigenfunction;
            let norm = w.lp_norm(p, radius)?;
            let report = VerificationReport::evaluate(check, w.sup_norm(), c * norm)
                .diag("lambda", pair.eigenvalue)
                .diag("radius", radius)
                .diag("constant", c)
                .diag("lp_norm", norm)
                .diag("boundary_residual", pair.boundary_residual());
            Ok((report, Some(pair.eigenfunction)))
        }
        Domain::WholeManifold { lambda } => {
            let Some(bottom) = scenario.model.spectrum_bottom() else {
                let report =
                    VerificationReport::not_applicable(check, "bottom of the spectrum is not known for this model")
                        .diag("lambda", lambda);
                return Ok((report, None));
            };
            if !(lambda <= bottom) {
                let report = VerificationReport::not_applicable(
                    check,
                    format!("λ = {lambda} lies above the bottom of the spectrum {bottom}"),
                )
                .diag("lambda", lambda)
                .diag("spectrum_bottom", bottom);
                return Ok((report, None));
            }
            let threshold = admissible_p_threshold(lambda, bottom)?;
            let sol = radial::solve_whole_manifold(&scenario.model, lambda, scenario.tol)?;
            let norm = sol.lp_norm(p)?;
            let base = |r: VerificationReport| {
                r.diag("lambda", lambda)
                    .diag("admissible_p_threshold", threshold)
                    .diag("truncation_radius", sol.truncation_radius)
                    .diag("decay_rate", sol.decay_rate)
                    .diag("volume_growth", sol.volume_growth)
                    .diag("tail_exponent", sol.tail_exponent(p))
                    .diag("stabilized", sol.stabilized)
            };
            let (norm, tail_fraction) = match norm {
                LpNorm::Divergent { tail_exponent } => {
                    let report = base(VerificationReport::not_applicable(
                        check,
                        format!("DIVERGENT: L^{p} tail exponent {tail_exponent:.6} is not negative"),
                    ))
                    .diag("divergent", true);
                    return Ok((report, Some(sol.function)));
                }
                LpNorm::Finite { value, tail_fraction } => (value, tail_fraction),
            };
            if !(p > threshold) {
                let report = base(VerificationReport::not_applicable(
                    check,
                    format!("p = {p} is not above the admissible threshold {threshold:.6}"),
                ))
                .diag("divergent", false)
                .diag("lp_norm", norm);
                return Ok((report, Some(sol.function)));
            }
            let c = scenario.constant_scale * eigen_bound_constant(lambda, p, &aif)?;
            let report = base(VerificationReport::evaluate(check, sol.function.sup_norm(), c * norm))
                .diag("divergent", false)
                .diag("constant", c)
                .diag("lp_norm", norm)
                .diag("tail_fraction", tail_fraction);
            Ok((report, Some(sol.function)))
        }
    }
}
