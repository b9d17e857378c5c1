//! Radial reductions of `-Δu = λu` and `-Δu = 1` on geodesic balls and whole models.
//!
//! In a rotationally symmetric model the Laplacian of a radial function is
//! `u'' + (n-1)(f'/f)u'`, so every problem here is a one-dimensional ODE or quadrature.

use std::io::Write;

use crate::error::{Error, Result};
use crate::format::sig12;
use crate::geometry::WarpingModel;
use crate::numerics::interp::{hermite, hermite_critical_points};
use crate::numerics::ode::{self, Flow, OdeOptions, Step};
use crate::numerics::quadrature;
use crate::numerics::roots::{bisect, bisect_predicate};

/// Radius of the series start at the pole.
pub const SERIES_RADIUS: f64 = 1e-3;
/// Largest step stored in a solution grid; keeps the cubic interpolant accurate.
pub const MAX_GRID_STEP: f64 = 0.05;
/// Search ceiling for principal eigenvalues.
pub const LAMBDA_CEILING: f64 = 1e6;
/// Uniform panels used to tabulate the torsion function.
pub const TORSION_PANELS: usize = 400;
/// Hard cap on the whole-manifold truncation radius.
pub const MAX_TRUNCATION_RADIUS: f64 = 200.0;
/// Tail exponents at or above this value are reported as divergent.
pub const DIVERGENCE_MARGIN: f64 = -1e-3;
/// Relative change of the decay exponent over one unit radius that counts as stable.
pub const DECAY_STABILITY: f64 = 1e-3;

const QUAD_RTOL: f64 = 1e-12;

/// A radial function sampled with derivatives, interpolated by piecewise cubic Hermite.
#[derive(Clone, Debug)]
pub struct RadialFunction {
    model: WarpingModel,
    r: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
}

impl RadialFunction {
    /// Validates the grid (starting at 0, strictly increasing) and the pole condition
    /// `u'(0) = 0`.
    pub fn from_samples(model: WarpingModel, r: Vec<f64>, u: Vec<f64>, du: Vec<f64>) -> Result<Self> {
        if r.len() < 2 || r.len() != u.len() || r.len() != du.len() {
            return Err(Error::Domain("radial samples need at least two equally sized columns".into()));
        }
        if r[0] != 0.0 {
            return Err(Error::Domain(format!("radial grid must start at 0, starts at {}", r[0])));
        }
        if r.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("radial grid must be strictly increasing".into()));
        }
        if u.iter().chain(&du).any(|v| !v.is_finite()) {
            return Err(Error::Numeric("radial samples contain non-finite values".into()));
        }
        let scale = u.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        if du[0].abs() > 1e-9 * scale {
            return Err(Error::Domain(format!("u'(0) must vanish, got {}", du[0])));
        }
        Ok(RadialFunction { model, r, u, du })
    }

    pub fn model(&self) -> &WarpingModel {
        &self.model
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.du
    }

    pub fn r_max(&self) -> f64 {
        *self.r.last().unwrap()
    }

    /// `(u(r), u'(r))` from the Hermite interpolant.
    pub fn eval(&self, r: f64) -> Result<(f64, f64)> {
        if !(r >= 0.0) || r > self.r_max() {
            return Err(Error::Domain(format!("radius {r} outside [0, {}]", self.r_max())));
        }
        let i = match self.r.binary_search_by(|v| v.total_cmp(&r)) {
            Ok(i) => return Ok((self.u[i], self.du[i])),
            Err(i) => i - 1,
        };
        Ok(self.panel_eval(i, r))
    }

    fn panel_eval(&self, i: usize, r: f64) -> (f64, f64) {
        hermite(self.r[i], self.r[i + 1], self.u[i], self.u[i + 1], self.du[i], self.du[i + 1], r)
    }

    /// `max |u|`: the largest node value refined by maximizing the interpolant on the
    /// neighboring panels.
    pub fn sup_norm(&self) -> f64 {
        let (imax, mut best) = self
            .u
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
        let lo = imax.saturating_sub(1);
        let hi = (imax + 1).min(self.r.len() - 1);
        for i in lo..hi {
            for x in hermite_critical_points(
                self.r[i],
                self.r[i + 1],
                self.u[i],
                self.u[i + 1],
                self.du[i],
                self.du[i + 1],
            ) {
                best = best.max(self.panel_eval(i, x).0.abs());
            }
        }
        best
    }

    /// `ω_{n-1} ∫₀^{r_max} g(u, u') f^{n-1} dr`, panel by panel on the solution grid.
    pub fn weighted_integral<G>(&self, g: G, r_max: f64) -> Result<f64>
    where
        G: Fn(f64, f64) -> f64,
    {
        if !(r_max > 0.0) || r_max > self.r_max() * (1.0 + 1e-14) {
            return Err(Error::Domain(format!(
                "integration radius {r_max} outside (0, {}]",
                self.r_max()
            )));
        }
        let power = self.model.dimension() as i32 - 1;
        let total = self.panel_sum(r_max, |i, x| {
            let (u, du) = self.panel_eval(i, x);
            Ok(g(u, du) * self.model.warping(x)?.0.powi(power))
        })?;
        Ok(self.model.sphere_measure() * total)
    }

    /// `‖u‖_p` over the ball of radius `r_max`.
    pub fn lp_norm(&self, p: f64, r_max: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self.lp_integral(p, r_max)?.powf(1.0 / p))
    }

    /// `∫ |u|^p dV` over the ball of radius `r_max`, with the integrand assembled in log
    /// space so large radii do not overflow.
    pub fn lp_integral(&self, p: f64, r_max: f64) -> Result<f64> {
        check_exponent(p)?;
        if !(r_max > 0.0) || r_max > self.r_max() * (1.0 + 1e-14) {
            return Err(Error::Domain(format!("norm radius {r_max} outside (0, {}]", self.r_max())));
        }
        let n1 = (self.model.dimension() - 1) as f64;
        let total = self.panel_sum(r_max, |i, x| {
            let (u, _) = self.panel_eval(i, x);
            if u == 0.0 {
                return Ok(0.0);
            }
            Ok((p * u.abs().ln() + n1 * self.model.log_warping(x)?).exp())
        })?;
        Ok(self.model.sphere_measure() * total)
    }

    /// Sum over grid panels up to `r_max` of a fixed Gauss rule, with panels wider than
    /// `MAX_GRID_STEP` split evenly. On each piece the integrand is a cubic expression times
    /// a smooth weight, which the 10-point rule resolves to roundoff.
    fn panel_sum<G>(&self, r_max: f64, g: G) -> Result<f64>
    where
        G: Fn(usize, f64) -> Result<f64>,
    {
        let err = std::cell::Cell::new(None);
        let mut total = 0.0;
        for i in 0..self.r.len() - 1 {
            let a = self.r[i];
            if a >= r_max {
                break;
            }
            let b = self.r[i + 1].min(r_max);
            let pieces = ((b - a) / MAX_GRID_STEP).ceil().max(1.0) as usize;
            let h = (b - a) / pieces as f64;
            for k in 0..pieces {
                let lo = a + k as f64 * h;
                let hi = if k + 1 == pieces { b } else { lo + h };
                total += quadrature::gauss_panel(
                    &|x| match g(i, x) {
                        Ok(v) => v,
                        Err(e) => {
                            err.set(Some(e));
                            f64::NAN
                        }
                    },
                    lo,
                    hi,
                );
                if let Some(e) = err.take() {
                    return Err(e);
                }
            }
        }
        if !total.is_finite() {
            return Err(Error::Numeric("non-finite radial integral".into()));
        }
        Ok(total)
    }

    /// Radius where a strictly decreasing `u` takes the value `t`.
    pub fn level_radius(&self, t: f64) -> Result<f64> {
        self.check_decreasing()?;
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("level must be nonnegative, got {t}")));
        }
        if t >= self.u[0] {
            return Ok(0.0);
        }
        let last = *self.u.last().unwrap();
        if t <= last {
            return Ok(self.r_max());
        }
        // Nodes decrease, so the level sits in the first panel whose right value is ≤ t.
        let i = self.u.partition_point(|v| *v > t) - 1;
        if self.u[i + 1] == t {
            return Ok(self.r[i + 1]);
        }
        bisect(
            |x| Ok(self.panel_eval(i, x).0 - t),
            self.r[i],
            self.r[i + 1],
            1e-15 * self.r[i + 1],
        )
    }

    fn check_decreasing(&self) -> Result<()> {
        if self.u.windows(2).any(|w| !(w[1] < w[0])) || self.du[1..].iter().any(|d| *d > 0.0) {
            return Err(Error::Precondition("function is not strictly decreasing in r".into()));
        }
        Ok(())
    }

    /// Writes `r,u,du` rows at 12 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "r,u,du")?;
        for i in 0..self.r.len() {
            writeln!(w, "{},{},{}", sig12(self.r[i]), sig12(self.u[i]), sig12(self.du[i]))?;
        }
        Ok(())
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("norm exponent must be at least 1, got {p}")));
    }
    Ok(())
}

/// Principal Dirichlet eigenvalue of a geodesic ball with its positive eigenfunction.
#[derive(Clone, Debug)]
pub struct DirichletEigenpair {
    pub eigenvalue: f64,
    pub radius: f64,
    pub eigenfunction: RadialFunction,
}

impl DirichletEigenpair {
    /// `|u(R)|` relative to `‖u‖_∞`.
    pub fn boundary_residual(&self) -> f64 {
        let u = &self.eigenfunction;
        u.values().last().unwrap().abs() / u.sup_norm().max(1e-300)
    }
}

/// Series start of the regular solution near the pole:
/// `u = 1 - λr²/(2n) + λ(λ - 2(n-1)K(0)/3) r⁴/(8n(n+2))`.
fn series_start(model: &WarpingModel, lambda: f64, r: f64) -> (f64, f64) {
    let n = model.dimension() as f64;
    let c3 = -model.curvature_at(0.0) / 6.0;
    let a = -lambda / (2.0 * n);
    let b = lambda * (lambda + 4.0 * c3 * (n - 1.0)) / (8.0 * n * (n + 2.0));
    let r2 = r * r;
    (1.0 + a * r2 + b * r2 * r2, 2.0 * a * r + 4.0 * b * r2 * r)
}

fn series_radius(lambda: f64) -> f64 {
    SERIES_RADIUS * (1.0 / lambda.abs().sqrt()).min(1.0)
}

fn eigen_rhs(model: &WarpingModel, lambda: f64) -> impl Fn(f64, &[f64; 2]) -> Result<[f64; 2]> + '_ {
    let n1 = (model.dimension() - 1) as f64;
    move |r, y| {
        let g = model.log_derivative(r)?;
        Ok([y[1], -n1 * g * y[1] - lambda * y[0]])
    }
}

fn ode_options(tol: f64) -> OdeOptions {
    let rtol = tol.clamp(1e-13, 1e-6);
    OdeOptions { rtol, atol: rtol * 1e-6, h_max: MAX_GRID_STEP, ..Default::default() }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("eigenvalue parameter must be positive, got {lambda}")));
    }
    Ok(())
}

/// Regular solution of `u'' + (n-1)(f'/f)u' + λu = 0`, `u(0) = 1`, `u'(0) = 0` on `[0, r_max]`.
pub fn solve_eigen_ivp(model: &WarpingModel, lambda: f64, r_max: f64, tol: f64) -> Result<RadialFunction> {
    check_lambda(lambda)?;
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::Domain(format!("integration radius must be positive, got {r_max}")));
    }
    let rs = series_radius(lambda).min(0.5 * r_max);
    let (u0, du0) = series_start(model, lambda, rs);
    let mut r = vec![0.0, rs];
    let mut u = vec![1.0, u0];
    let mut du = vec![0.0, du0];
    ode::integrate(eigen_rhs(model, lambda), rs, [u0, du0], r_max, &ode_options(tol), |_, s| {
        r.push(s.t);
        u.push(s.y[0]);
        du.push(s.y[1]);
        Ok(Flow::Continue)
    })?;
    RadialFunction::from_samples(model.clone(), r, u, du)
}

/// True when the regular solution for `lambda` has a zero in `(0, radius]`.
fn vanishes_within(model: &WarpingModel, lambda: f64, radius: f64, tol: f64) -> Result<bool> {
    let rs = series_radius(lambda).min(0.5 * radius);
    let (u0, du0) = series_start(model, lambda, rs);
    if u0 <= 0.0 {
        return Ok(true);
    }
    let mut hit = false;
    let end = ode::integrate(
        eigen_rhs(model, lambda),
        rs,
        [u0, du0],
        radius,
        &ode_options(tol),
        |prev: &Step<2>, s: &Step<2>| {
            if s.y[0] <= 0.0 {
                hit = true;
            } else {
                let dips = hermite_critical_points(prev.t, s.t, prev.y[0], s.y[0], prev.dy[0], s.dy[0])
                    .into_iter()
                    .any(|x| hermite(prev.t, s.t, prev.y[0], s.y[0], prev.dy[0], s.dy[0], x).0 <= 0.0);
                hit = dips;
            }
            Ok(if hit { Flow::Stop } else { Flow::Continue })
        },
    )?;
    Ok(hit || end.y[0] <= 0.0)
}

/// Rough lower estimate of the Euclidean principal eigenvalue `j²_{n/2-1,1}/R²`.
fn euclidean_estimate(dimension: u32, radius: f64) -> f64 {
    let nu = dimension as f64 / 2.0 - 1.0;
    let j = nu + 1.8557571 * (nu + 1.0).cbrt() + 0.55;
    j * j / (radius * radius)
}

/// Principal Dirichlet eigenvalue of the geodesic ball `B_R` by shooting: bisection on
/// `λ` over the predicate "the regular solution vanishes in `(0, R]`".
pub fn principal_dirichlet_eigenvalue(model: &WarpingModel, radius: f64, tol: f64) -> Result<DirichletEigenpair> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let pred = |lambda: f64| vanishes_within(model, lambda, radius, tol);

    let mut lo = (0.5 * euclidean_estimate(model.dimension(), radius)).min(LAMBDA_CEILING);
    while pred(lo)? {
        lo *= 0.5;
        if lo < 1e-12 {
            return Err(Error::Search(format!("no eigenvalue bracket above 1e-12 for R = {radius}")));
        }
    }
    let mut hi = 2.0 * lo;
    while !pred(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > LAMBDA_CEILING {
            return Err(Error::Search(format!(
                "no sign change below the ceiling {LAMBDA_CEILING:e} for R = {radius}"
            )));
        }
    }
    let (lo, hi) = bisect_predicate(pred, lo, hi, tol.max(1e-15))?;
    let eigenvalue = 0.5 * (lo + hi);
    let eigenfunction = solve_eigen_ivp(model, eigenvalue, radius, tol)?;
    Ok(DirichletEigenpair { eigenvalue, radius, eigenfunction })
}

/// Torsion function `u(r) = ∫_r^R |B_s|/|∂B_s| ds`, the radial solution of `-Δu = 1` with
/// `u(R) = 0`, tabulated on a uniform grid by nested adaptive quadrature.
pub fn solve_torsion(model: &WarpingModel, radius: f64) -> Result<RadialFunction> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
    }
    let m = TORSION_PANELS;
    let r: Vec<f64> = (0..=m).map(|i| radius * i as f64 / m as f64).collect();
    let mut volume = vec![0.0; m + 1];
    for i in 1..=m {
        volume[i] = volume[i - 1] + model.shell_volume(r[i - 1], r[i], QUAD_RTOL)?;
    }
    let mut u = vec![0.0; m + 1];
    let err = std::cell::Cell::new(None);
    for i in (0..m).rev() {
        let (a, b, va) = (r[i], r[i + 1], volume[i]);
        let seg = quadrature::integrate(
            |s| {
                let v = model.shell_volume(a, s, QUAD_RTOL).map(|dv| va + dv);
                match (v, model.ball_area(s)) {
                    (Ok(v), Ok(area)) => v / area,
                    (Err(e), _) | (_, Err(e)) => {
                        err.set(Some(e));
                        f64::NAN
                    }
                }
            },
            a,
            b,
            QUAD_RTOL,
        )?;
        if let Some(e) = err.take() {
            return Err(e);
        }
        u[i] = u[i + 1] + seg;
    }
    let mut du = vec![0.0; m + 1];
    for i in 1..=m {
        du[i] = -volume[i] / model.ball_area(r[i])?;
    }
    RadialFunction::from_samples(model.clone(), r, u, du)
}

/// Distribution function `μ(t) = |{u > t}|` of a positive, strictly decreasing radial
/// function: the volume of the ball of radius `r(t)` with `u(r(t)) = t`.
pub fn distribution_function(u: &RadialFunction, t: f64) -> Result<f64> {
    u.check_decreasing()?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("level must be nonnegative, got {t}")));
    }
    if t >= u.values()[0] {
        return Ok(0.0);
    }
    u.model().ball_volume(u.level_radius(t)?)
}

/// Result of an Lᵖ norm over a whole manifold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LpNorm {
    Finite { value: f64, tail_fraction: f64 },
    /// The integrand's tail grows like `e^{exponent·r}` with `exponent ≥ -1e-3`.
    Divergent { tail_exponent: f64 },
}

/// Regular eigenfunction on a whole model, truncated where its decay rate has stabilized.
#[derive(Clone, Debug)]
pub struct WholeManifoldSolution {
    pub lambda: f64,
    pub function: RadialFunction,
    pub truncation_radius: f64,
    /// Decay rate `σ = -(ln u)'` at the truncation radius.
    pub decay_rate: f64,
    /// Volume growth rate `(n-1)(ln f)'` at the truncation radius.
    pub volume_growth: f64,
    /// False when the truncation cap was reached before the decay rate settled.
    pub stabilized: bool,
}

impl WholeManifoldSolution {
    /// Exponent of the Lᵖ integrand's tail, `σ_vol - pσ`.
    pub fn tail_exponent(&self, p: f64) -> f64 {
        self.volume_growth - p * self.decay_rate
    }

    /// `‖u‖_p` over the whole manifold: quadrature up to the truncation radius plus an
    /// exponential tail extrapolation.
    pub fn lp_norm(&self, p: f64) -> Result<LpNorm> {
        check_exponent(p)?;
        let exponent = self.tail_exponent(p);
        if exponent >= DIVERGENCE_MARGIN {
            return Ok(LpNorm::Divergent { tail_exponent: exponent });
        }
        let body = self.function.lp_integral(p, self.truncation_radius)?;
        let model = self.function.model();
        let (u_end, _) = self.function.eval(self.truncation_radius)?;
        let n1 = (model.dimension() - 1) as f64;
        let edge = (p * u_end.abs().ln() + n1 * model.log_warping(self.truncation_radius)?).exp()
            * model.sphere_measure();
        let tail = edge / (-exponent);
        let total = body + tail;
        Ok(LpNorm::Finite { value: total.powf(1.0 / p), tail_fraction: tail / total })
    }
}

/// Integrates the regular solution outward until `σ(r) = -(ln u)'(r)` changes by less than
/// `1e-3` relative over one unit of radius. Requires the solution to stay positive, which
/// holds for `λ` at or below the bottom of the spectrum.
pub fn solve_whole_manifold(model: &WarpingModel, lambda: f64, tol: f64) -> Result<WholeManifoldSolution> {
    check_lambda(lambda)?;
    let n1 = (model.dimension() - 1) as f64;
    let rs = series_radius(lambda);
    let (u0, du0) = series_start(model, lambda, rs);
    // State (ln u, z = u'/u); z solves the Riccati equation z' = -z² - (n-1)(f'/f)z - λ.
    let rhs = |r: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let g = model.log_derivative(r)?;
        Ok([y[1], -y[1] * y[1] - n1 * g * y[1] - lambda])
    };
    let mut r = vec![0.0, rs];
    let mut lnu = vec![0.0, u0.ln()];
    let mut z = vec![0.0, du0 / u0];
    let opts = ode_options(tol);
    let mut start = rs;
    let mut state = [u0.ln(), du0 / u0];
    let mut sigma_prev: Option<f64> = None;
    let mut stabilized = false;
    loop {
        let end = (start.floor() + 1.0).min(MAX_TRUNCATION_RADIUS);
        let last = ode::integrate(rhs, start, state, end, &opts, |_, s| {
            if !(s.y[1].is_finite() && s.y[0].is_finite()) || s.y[1] < -1e6 {
                return Err(Error::Precondition(format!(
                    "regular solution for λ = {lambda} is not positive (vanishes near r = {})",
                    s.t
                )));
            }
            r.push(s.t);
            lnu.push(s.y[0]);
            z.push(s.y[1]);
            Ok(Flow::Continue)
        })?;
        start = last.t;
        state = last.y;
        let sigma = -last.y[1];
        if let Some(prev) = sigma_prev {
            if start >= 2.0 && (sigma - prev).abs() < DECAY_STABILITY * sigma.abs() {
                stabilized = true;
                break;
            }
        }
        sigma_prev = Some(sigma);
        if start >= MAX_TRUNCATION_RADIUS {
            break;
        }
    }
    let u: Vec<f64> = lnu.iter().map(|v| v.exp()).collect();
    let du: Vec<f64> = u.iter().zip(&z).map(|(u, z)| u * z).collect();
    let function = RadialFunction::from_samples(model.clone(), r, u, du)?;
    let truncation_radius = start;
    Ok(WholeManifoldSolution {
        lambda,
        function,
        truncation_radius,
        decay_rate: -state[1],
        volume_growth: n1 * model.log_derivative(truncation_radius)?,
        stabilized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ivp_starts_normalized() {
        let m = WarpingModel::hyperbolic(3, 1.0).unwrap();
        let u = solve_eigen_ivp(&m, 0.7, 2.0, 1e-10).unwrap();
        assert_eq!(u.values()[0], 1.0);
        assert_eq!(u.derivatives()[0], 0.0);
        let tiny = solve_eigen_ivp(&WarpingModel::hyperbolic(2, 1.0).unwrap(), 1e-12, 5.0, 1e-10).unwrap();
        assert!(tiny.values().iter().all(|v| (v - 1.0).abs() < 1e-9));
    }

    #[test]
    fn ivp_rejects_bad_parameters() {
        let m = WarpingModel::euclidean(2).unwrap();
        assert!(matches!(solve_eigen_ivp(&m, 0.0, 1.0, 1e-10), Err(Error::Domain(_))));
        assert!(matches!(solve_eigen_ivp(&m, 1.0, -1.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn three_dimensional_ball_of_radius_pi() {
        let m = WarpingModel::euclidean(3).unwrap();
        let pair = principal_dirichlet_eigenvalue(&m, PI, 1e-11).unwrap();
        assert!((pair.eigenvalue - 1.0).abs() < 1e-6, "{}", pair.eigenvalue);
        let (u, _) = pair.eigenfunction.eval(1.0).unwrap();
        assert_relative_eq!(u, 1f64.sin(), max_relative = 1e-7);
    }

    #[test]
    fn torsion_closed_forms() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        let u = solve_torsion(&e2, 1.0).unwrap();
        assert_relative_eq!(u.values()[0], 0.25, max_relative = 1e-10);
        assert_eq!(*u.values().last().unwrap(), 0.0);
        assert_relative_eq!(u.sup_norm(), 0.25, max_relative = 1e-10);
        let h2 = WarpingModel::hyperbolic(2, 1.0).unwrap();
        let u = solve_torsion(&h2, 1.0).unwrap();
        assert_relative_eq!(u.values()[0], 2.0 * 0.5f64.cosh().ln(), max_relative = 1e-10);
    }

    #[test]
    fn distribution_of_planar_torsion() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        let u = solve_torsion(&e2, 1.0).unwrap();
        assert_relative_eq!(distribution_function(&u, 0.125).unwrap(), PI / 2.0, max_relative = 1e-10);
        assert_relative_eq!(distribution_function(&u, 0.0).unwrap(), PI, max_relative = 1e-12);
        assert_eq!(distribution_function(&u, 0.25).unwrap(), 0.0);
        assert_eq!(distribution_function(&u, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn distribution_needs_decreasing_function() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        let bump = RadialFunction::from_samples(e2, vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, -1.0])
            .unwrap();
        assert!(matches!(distribution_function(&bump, 0.5), Err(Error::Precondition(_))));
    }

    #[test]
    fn norms_of_constants() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        let one = RadialFunction::from_samples(e2.clone(), vec![0.0, 0.5, 1.0], vec![1.0; 3], vec![0.0; 3]).unwrap();
        assert_relative_eq!(one.lp_norm(4.0, 1.0).unwrap(), PI.powf(0.25), max_relative = 1e-12);
        let two = RadialFunction::from_samples(e2.clone(), vec![0.0, 1.0], vec![2.0; 2], vec![0.0; 2]).unwrap();
        assert_relative_eq!(two.lp_norm(2.0, 1.0).unwrap(), 2.0 * PI.sqrt(), max_relative = 1e-12);
        assert!(matches!(two.lp_norm(0.5, 1.0), Err(Error::Domain(_))));
        let zero = RadialFunction::from_samples(e2, vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2]).unwrap();
        assert_eq!(zero.sup_norm(), 0.0);
    }

    #[test]
    fn csv_export_has_fixed_format() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        let u = RadialFunction::from_samples(e2, vec![0.0, 0.5], vec![1.0, 0.75], vec![0.0, -1.0 / 3.0]).unwrap();
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "r,u,du\n0.00000000000e0,1.00000000000e0,0.00000000000e0\n5.00000000000e-1,7.50000000000e-1,-3.33333333333e-1\n"
        );
    }

    #[test]
    fn grid_validation() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        assert!(RadialFunction::from_samples(e2.clone(), vec![0.1, 1.0], vec![1.0; 2], vec![0.0; 2]).is_err());
        assert!(RadialFunction::from_samples(e2.clone(), vec![0.0, 0.0], vec![1.0; 2], vec![0.0; 2]).is_err());
        assert!(RadialFunction::from_samples(e2, vec![0.0, 1.0], vec![1.0; 2], vec![0.5, 0.0]).is_err());
    }
}
