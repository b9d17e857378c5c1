//! Isoperimetric functions `H` and the associated isoperimetric function
//! `H_a(t) = ∫₀ᵗ s / H(s)² ds`.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::RwLock;

use crate::error::{Error, Result};
use crate::geometry::WarpingModel;
use crate::numerics::interp::MonotoneCubic;
use crate::numerics::quadrature;
use crate::numerics::roots::newton_increasing;

/// Volume below which the a.i.f. integrand is replaced by its fitted leading power.
pub const SINGULAR_SPLIT: f64 = 1e-4;
/// Default relative quadrature tolerance of [`AifEvaluator`].
pub const AIF_RTOL: f64 = 1e-11;
/// Fraction of the singular segment handled by the fitted power law.
const HEAD_SHRINK: f64 = 1e-6;

const FIRST_RADIUS_KNOT: f64 = 1.0 / 64.0;
const MAX_KNOTS: usize = 4096;

/// Sampled profile interpolated monotonically in log-log coordinates.
///
/// On `[0, s₀]` (below the first positive sample) the profile continues as the power law
/// through the first two positive samples, which pins `H(0) = 0`.
#[derive(Clone, Debug)]
pub struct TabulatedProfile {
    log_interp: MonotoneCubic,
    head_exponent: f64,
    last_volume: f64,
}

impl TabulatedProfile {
    /// Builds a profile from `(s, H)` samples with strictly increasing `s`. A leading
    /// `(0, 0)` row is accepted and dropped; every other sample needs `s > 0` and `H > 0`.
    pub fn new(samples: &[(f64, f64)]) -> Result<Self> {
        let mut rows = samples;
        if let Some(&(s0, h0)) = rows.first() {
            if s0 == 0.0 {
                if h0 != 0.0 {
                    return Err(Error::InvalidProfile(format!("H(0) must be 0, table gives {h0}")));
                }
                rows = &rows[1..];
            }
        }
        if rows.len() < 2 {
            return Err(Error::InvalidProfile(
                "tabulated profile needs at least two samples with s > 0".into(),
            ));
        }
        for (i, &(s, h)) in rows.iter().enumerate() {
            if !(s > 0.0 && s.is_finite()) || !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidProfile(format!(
                    "sample {i}: need s > 0 and H > 0, got ({s}, {h})"
                )));
            }
        }
        if rows.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidProfile("sample volumes must be strictly increasing".into()));
        }
        let xs = rows.iter().map(|r| r.0.ln()).collect();
        let ys = rows.iter().map(|r| r.1.ln()).collect();
        let head_exponent = (rows[1].1 / rows[0].1).ln() / (rows[1].0 / rows[0].0).ln();
        Ok(TabulatedProfile {
            log_interp: MonotoneCubic::new(xs, ys)?,
            head_exponent,
            last_volume: rows[rows.len() - 1].0,
        })
    }

    /// Parses a two-column CSV with header `s,H`.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| Error::InvalidProfile(format!("unreadable CSV header: {e}")))?;
        if headers.len() != 2 || &headers[0] != "s" || &headers[1] != "H" {
            return Err(Error::InvalidProfile(format!(
                "CSV header must be `s,H`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut samples = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::InvalidProfile(format!("CSV row {}: {e}", i + 2)))?;
            let parse = |k: usize| -> Result<f64> {
                rec[k].parse::<f64>().map_err(|e| {
                    Error::InvalidProfile(format!("CSV row {}, column {}: {e}", i + 2, k + 1))
                })
            };
            samples.push((parse(0)?, parse(1)?));
        }
        Self::new(&samples)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_csv_reader(std::io::BufReader::new(file))
    }

    pub fn last_volume(&self) -> f64 {
        self.last_volume
    }

    fn eval(&self, s: f64) -> Option<f64> {
        if s == 0.0 {
            return Some(0.0);
        }
        if s > self.last_volume {
            return None;
        }
        let (lo, hi) = self.log_interp.x_range();
        let ls = s.ln().min(hi);
        if ls < lo {
            let h0 = self.log_interp.ys()[0];
            return Some((h0 + self.head_exponent * (ls - lo)).exp());
        }
        self.log_interp.eval(ls).map(f64::exp)
    }
}

#[derive(Clone, Debug)]
pub enum ProfileVariant {
    /// `H(s) = D·s^{1-1/n}`.
    PowerLaw { d: f64, n: u32 },
    /// `H(v) = |∂B_R|` for the geodesic ball with `|B_R| = v` in the given model.
    ModelProfile { model: WarpingModel },
    Tabulated(TabulatedProfile),
}

/// A lower bound `H(|Ω|) ≤ |∂Ω|` on boundary measure in terms of enclosed volume.
#[derive(Clone, Debug)]
pub struct IsoperimetricFunction {
    variant: ProfileVariant,
}

impl IsoperimetricFunction {
    pub fn power_law(d: f64, n: u32) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::InvalidProfile(format!("power-law constant must be positive, got {d}")));
        }
        if n < 2 {
            return Err(Error::InvalidProfile(format!("power-law dimension must be at least 2, got {n}")));
        }
        Ok(IsoperimetricFunction { variant: ProfileVariant::PowerLaw { d, n } })
    }

    /// The planar constant `√(4π)`, valid on simply connected surfaces of nonpositive
    /// curvature. Other dimensions have no shipped default.
    pub fn default_constant(n: u32) -> Option<f64> {
        (n == 2).then(|| (4.0 * std::f64::consts::PI).sqrt())
    }

    pub fn model_profile(model: WarpingModel) -> Self {
        IsoperimetricFunction { variant: ProfileVariant::ModelProfile { model } }
    }

    pub fn tabulated(profile: TabulatedProfile) -> Self {
        IsoperimetricFunction { variant: ProfileVariant::Tabulated(profile) }
    }

    pub fn variant(&self) -> &ProfileVariant {
        &self.variant
    }

    /// Right end of the domain (inclusive); `+∞` for profiles of infinite-volume manifolds.
    pub fn domain_end(&self) -> f64 {
        match &self.variant {
            ProfileVariant::Tabulated(t) => t.last_volume(),
            _ => f64::INFINITY,
        }
    }

    /// Model profiles are only candidate isoperimetric functions: balls need not be
    /// isoperimetric minimizers in a general model.
    pub fn is_candidate(&self) -> bool {
        matches!(self.variant, ProfileVariant::ModelProfile { .. })
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) || s > self.domain_end() {
            return Err(Error::Domain(format!(
                "volume {s} outside the profile domain [0, {}]",
                self.domain_end()
            )));
        }
        match &self.variant {
            ProfileVariant::PowerLaw { d, n } => Ok(d * s.powf(1.0 - 1.0 / *n as f64)),
            ProfileVariant::ModelProfile { model } => {
                if s == 0.0 {
                    return Ok(0.0);
                }
                model.ball_area(model.radius_for_volume(s)?)
            }
            ProfileVariant::Tabulated(t) => t
                .eval(s)
                .ok_or_else(|| Error::Domain(format!("volume {s} outside the tabulated range"))),
        }
    }
}

impl fmt::Display for IsoperimetricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.variant {
            ProfileVariant::PowerLaw { d, n } => write!(f, "power-law(D={d}, n={n})"),
            ProfileVariant::ModelProfile { model } => {
                write!(f, "candidate ball profile of {:?} (n={})", model.kind(), model.dimension())
            }
            ProfileVariant::Tabulated(t) => write!(f, "tabulated profile on [0, {}]", t.last_volume()),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Knot {
    /// Volume for the direct route, radius for the ball-parametrized route.
    x: f64,
    volume: f64,
    value: f64,
}

#[derive(Debug)]
enum Route {
    /// Integrate `s/H(s)²` in the volume variable.
    Volume,
    /// Substitute `s = |B_r|`, turning the integrand into `|B_r| / |∂B_r|` in `r`.
    Radius(WarpingModel),
}

/// Cached evaluator for `H_a` and its inverse.
///
/// Values are accumulated on a geometric grid of knots, each holding the exact cumulative
/// integral up to that point; a query integrates only from the nearest knot below it.
#[derive(Debug)]
pub struct AifEvaluator {
    profile: IsoperimetricFunction,
    rtol: f64,
    route: Route,
    knots: RwLock<Vec<Knot>>,
}

impl AifEvaluator {
    pub fn new(profile: IsoperimetricFunction) -> Result<Self> {
        Self::with_tolerance(profile, AIF_RTOL)
    }

    pub fn with_tolerance(profile: IsoperimetricFunction, rtol: f64) -> Result<Self> {
        if !(rtol > 0.0 && rtol < 1e-2) {
            return Err(Error::Domain(format!("a.i.f. tolerance must lie in (0, 1e-2), got {rtol}")));
        }
        let route = match profile.variant() {
            ProfileVariant::ModelProfile { model } => Route::Radius(model.clone()),
            _ => Route::Volume,
        };
        let aif = AifEvaluator { profile, rtol, route, knots: RwLock::new(Vec::new()) };
        let first = match &aif.route {
            Route::Volume => {
                let eps = SINGULAR_SPLIT.min(aif.profile.domain_end());
                Knot { x: eps, volume: eps, value: aif.head_integral(eps)? }
            }
            Route::Radius(_) => Knot { x: 0.0, volume: 0.0, value: 0.0 },
        };
        aif.knots.write().unwrap().push(first);
        Ok(aif)
    }

    pub fn profile(&self) -> &IsoperimetricFunction {
        &self.profile
    }

    pub fn tolerance(&self) -> f64 {
        self.rtol
    }

    /// `H_a(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || t > self.profile.domain_end() {
            return Err(Error::Domain(format!(
                "a.i.f. argument {t} outside [0, {}]",
                self.profile.domain_end()
            )));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        match &self.route {
            Route::Volume => {
                let first = self.knots.read().unwrap()[0];
                if t <= first.x {
                    return self.head_integral(t);
                }
                let k = self.knot_below(t)?;
                Ok(k.value + self.volume_segment(k.x, t)?)
            }
            Route::Radius(model) => {
                let r = model.radius_for_volume(t)?;
                let k = self.knot_below(r)?;
                Ok(k.value + self.radius_segment(model, &k, r)?)
            }
        }
    }

    /// `H_a'(t) = t / H(t)²`.
    pub fn derivative(&self, t: f64) -> Result<f64> {
        let h = self.profile.eval(t)?;
        if !(h > 0.0) {
            return Err(Error::InvalidProfile(format!("H vanishes at s = {t}")));
        }
        Ok(t / (h * h))
    }

    /// `H_a⁻¹(y)`, growing the knot grid until `y` is bracketed.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) || !y.is_finite() {
            return Err(Error::Domain(format!("a.i.f. inverse needs a finite y ≥ 0, got {y}")));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let (below, above) = self.bracket_value(y)?;
        let ftol = 1e-14 * y.max(1e-300);
        match &self.route {
            Route::Volume => {
                let lo = below.map_or(0.0, |k| k.x);
                newton_increasing(
                    |t| Ok((self.eval(t)? - y, self.derivative(t)?)),
                    lo,
                    above.x,
                    ftol,
                )
            }
            Route::Radius(model) => {
                let below = below.expect("radius route starts with a zero knot");
                let r = newton_increasing(
                    |r| {
                        let (value, volume) = self.radius_state(model, &below, r)?;
                        let area = model.ball_area(r)?;
                        Ok((value - y, volume / area))
                    },
                    below.x,
                    above.x,
                    ftol,
                )?;
                Ok(below.volume + model.shell_volume(below.x, r, 1e-13)?)
            }
        }
    }

    /// Closed-form integral over `[0, eps]` of the leading power behavior of `s/H(s)²`,
    /// fitted from `H(eps/2)` and `H(eps)`.
    /// `∫₀^ε s/H(s)² ds`: a fitted power law on `[0, ε·HEAD_SHRINK]`, where higher-order
    /// terms of `H` are negligible, and quadrature in `ln s` on the rest, where the
    /// integrand `s²/H(s)²` is smooth.
    fn head_integral(&self, eps: f64) -> Result<f64> {
        let delta = eps * HEAD_SHRINK;
        let h1 = self.profile.eval(delta)?;
        let h0 = self.profile.eval(0.5 * delta)?;
        if !(h0 > 0.0 && h1 > 0.0) {
            return Err(Error::InvalidProfile(format!("H vanishes near s = 0 (H({delta}) = {h1})")));
        }
        let exponent = (h1 / h0).log2();
        if !(exponent < 1.0 - 1e-9) {
            return Err(Error::InvalidProfile(format!(
                "H grows like s^{exponent:.4} near 0, so s/H(s)² is not integrable"
            )));
        }
        let tip = delta * delta / ((2.0 - 2.0 * exponent) * h1 * h1);
        let err = std::cell::Cell::new(None);
        let body = quadrature::integrate(
            |u| {
                let s = u.exp().min(eps);
                match self.profile.eval(s) {
                    Ok(h) if h > 0.0 => (s / h) * (s / h),
                    Ok(_) => {
                        err.set(Some(Error::InvalidProfile(format!("H vanishes at s = {s}"))));
                        f64::NAN
                    }
                    Err(e) => {
                        err.set(Some(e));
                        f64::NAN
                    }
                }
            },
            delta.ln(),
            eps.ln(),
            self.rtol,
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(tip + body?)
    }

    fn volume_segment(&self, a: f64, b: f64) -> Result<f64> {
        let err = std::cell::Cell::new(None);
        let v = quadrature::integrate(
            |s| match self.profile.eval(s) {
                Ok(h) if h > 0.0 => s / (h * h),
                Ok(_) => {
                    err.set(Some(Error::InvalidProfile(format!("H vanishes at s = {s}"))));
                    f64::NAN
                }
                Err(e) => {
                    err.set(Some(e));
                    f64::NAN
                }
            },
            a,
            b,
            self.rtol,
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        v
    }

    /// `(H_a, volume)` at radius `r`, integrating from the knot `k`.
    fn radius_state(&self, model: &WarpingModel, k: &Knot, r: f64) -> Result<(f64, f64)> {
        Ok((k.value + self.radius_segment(model, k, r)?, k.volume + model.shell_volume(k.x, r, 1e-13)?))
    }

    fn radius_segment(&self, model: &WarpingModel, k: &Knot, r: f64) -> Result<f64> {
        if r <= k.x {
            return Ok(0.0);
        }
        let err = std::cell::Cell::new(None);
        let v = quadrature::integrate(
            |rho| {
                let vol = model.shell_volume(k.x, rho, 1e-13).map(|v| v + k.volume);
                match (vol, model.ball_area(rho)) {
                    (Ok(vol), Ok(area)) => vol / area,
                    (Err(e), _) | (_, Err(e)) => {
                        err.set(Some(e));
                        f64::NAN
                    }
                }
            },
            k.x,
            r,
            self.rtol,
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        v
    }

    fn next_knot(&self, last: &Knot) -> Result<Option<Knot>> {
        match &self.route {
            Route::Volume => {
                let end = self.profile.domain_end();
                if last.x >= end {
                    return Ok(None);
                }
                let x = (2.0 * last.x).min(end);
                let value = last.value + self.volume_segment(last.x, x)?;
                Ok(Some(Knot { x, volume: x, value }))
            }
            Route::Radius(model) => {
                let x = if last.x == 0.0 { FIRST_RADIUS_KNOT } else { 2.0 * last.x };
                let (value, volume) = self.radius_state(model, last, x)?;
                if !volume.is_finite() {
                    return Ok(None);
                }
                Ok(Some(Knot { x, volume, value }))
            }
        }
    }

    /// Last knot with `x ≤ target`, extending the grid as needed.
    fn knot_below(&self, target: f64) -> Result<Knot> {
        self.extend_while(|k| k.x < target)?;
        let knots = self.knots.read().unwrap();
        let i = knots.partition_point(|k| k.x <= target);
        Ok(knots[i.saturating_sub(1)])
    }

    fn bracket_value(&self, y: f64) -> Result<(Option<Knot>, Knot)> {
        self.extend_while(|k| k.value < y)?;
        let knots = self.knots.read().unwrap();
        let last = *knots.last().unwrap();
        if last.value < y {
            return Err(Error::Range { value: y, sup: last.value });
        }
        let i = knots.partition_point(|k| k.value < y);
        let below = if i == 0 { None } else { Some(knots[i - 1]) };
        Ok((below, knots[i]))
    }

    fn extend_while<P: Fn(&Knot) -> bool>(&self, more: P) -> Result<()> {
        {
            let knots = self.knots.read().unwrap();
            if !more(knots.last().unwrap()) {
                return Ok(());
            }
        }
        let mut knots = self.knots.write().unwrap();
        while more(knots.last().unwrap()) {
            if knots.len() >= MAX_KNOTS {
                break;
            }
            match self.next_knot(knots.last().unwrap())? {
                Some(k) => knots.push(k),
                None => break,
            }
        }
        Ok(())
    }
}
