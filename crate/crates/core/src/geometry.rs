//! Rotationally symmetric model manifolds `dr² + f(r)² dΘ²` and the geometry of their
//! geodesic balls.
//!
//! Euclidean and constant-curvature hyperbolic models use closed forms for the warping
//! function. A [`Curvature`] model integrates the Jacobi equation `f'' = -K(r) f` with an
//! embedded Runge-Kutta scheme and caches the result; the cache is extended lazily
//! whenever a radius beyond the integrated range is requested.

use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::numerics::interp::hermite;
use crate::numerics::ode::{self, Flow, OdeOptions};
use crate::numerics::quadrature;
use crate::numerics::special::unit_sphere_measure;

/// Relative tolerance used for ball volumes unless the caller asks otherwise.
pub const VOLUME_RTOL: f64 = 1e-12;
/// Default maximum step of the Jacobi integration.
pub const DEFAULT_GRID_RESOLUTION: f64 = 0.01;
/// Relative tolerance of the Jacobi integration.
pub const JACOBI_RTOL: f64 = 1e-10;

/// Radial sectional curvature `K(r) ≤ 0` of a curvature-driven model.
#[derive(Clone)]
pub enum Curvature {
    /// `K(r) = -κ`.
    Constant { kappa: f64 },
    /// `K(r) = -(a + b·r^exponent)`.
    Power { a: f64, b: f64, exponent: f64 },
    /// Arbitrary evaluator; must return nonpositive values.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Curvature {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Curvature::Constant { kappa } => -kappa,
            Curvature::Power { a, b, exponent } => -(a + b * r.powf(*exponent)),
            Curvature::Custom(k) => k(r),
        }
    }
}

impl fmt::Debug for Curvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curvature::Constant { kappa } => write!(f, "Constant {{ kappa: {kappa} }}"),
            Curvature::Power { a, b, exponent } => {
                write!(f, "Power {{ a: {a}, b: {b}, exponent: {exponent} }}")
            }
            Curvature::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ModelKind {
    Euclidean,
    /// Constant curvature `-κ`, warping `sinh(√κ r)/√κ`.
    Hyperbolic { kappa: f64 },
    /// Warping obtained by integrating `f'' = -K(r) f`, `f(0) = 0`, `f'(0) = 1`.
    JacobiCurvature { curvature: Curvature, grid_resolution: f64 },
}

/// Dense samples `(r, f, f', f'')` of an integrated warping function.
#[derive(Debug, Default)]
struct JacobiTable {
    nodes: Vec<[f64; 4]>,
}

#[derive(Debug)]
struct JacobiCache {
    table: RwLock<JacobiTable>,
}

/// A rotationally symmetric model manifold of dimension `n ≥ 2`.
///
/// Cloning is cheap; clones of a curvature-driven model share one warping cache.
#[derive(Clone, Debug)]
pub struct WarpingModel {
    dimension: u32,
    kind: ModelKind,
    jacobi: Option<Arc<JacobiCache>>,
}

/// Radius, volume and boundary area of one geodesic ball.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallGeometry {
    pub radius: f64,
    pub volume: f64,
    pub boundary_area: f64,
}

fn check_dimension(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidModel(format!("dimension must be at least 2, got {n}")));
    }
    if n > 200 {
        return Err(Error::InvalidModel(format!("dimension {n} is unreasonably large")));
    }
    Ok(())
}

impl WarpingModel {
    pub fn euclidean(dimension: u32) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(WarpingModel { dimension, kind: ModelKind::Euclidean, jacobi: None })
    }

    pub fn hyperbolic(dimension: u32, kappa: f64) -> Result<Self> {
        check_dimension(dimension)?;
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidModel(format!("curvature magnitude must be positive, got {kappa}")));
        }
        Ok(WarpingModel { dimension, kind: ModelKind::Hyperbolic { kappa }, jacobi: None })
    }

    pub fn jacobi(dimension: u32, curvature: Curvature, grid_resolution: Option<f64>) -> Result<Self> {
        check_dimension(dimension)?;
        let grid_resolution = grid_resolution.unwrap_or(DEFAULT_GRID_RESOLUTION);
        if !(grid_resolution > 0.0 && grid_resolution.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "grid resolution must be positive, got {grid_resolution}"
            )));
        }
        let k0 = curvature.eval(0.0);
        if !(k0 <= 0.0) {
            return Err(Error::InvalidModel(format!("curvature must be nonpositive, K(0) = {k0}")));
        }
        let cache = JacobiCache {
            table: RwLock::new(JacobiTable { nodes: vec![[0.0, 0.0, 1.0, 0.0]] }),
        };
        Ok(WarpingModel {
            dimension,
            kind: ModelKind::JacobiCurvature { curvature, grid_resolution },
            jacobi: Some(Arc::new(cache)),
        })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Total measure ω_{n-1} of the unit (n-1)-sphere.
    pub fn sphere_measure(&self) -> f64 {
        unit_sphere_measure(self.dimension)
    }

    /// Radial sectional curvature K(r).
    pub fn curvature_at(&self, r: f64) -> f64 {
        match &self.kind {
            ModelKind::Euclidean => 0.0,
            ModelKind::Hyperbolic { kappa } => -kappa,
            ModelKind::JacobiCurvature { curvature, .. } => curvature.eval(r),
        }
    }

    /// Bottom of the L² spectrum `(n-1)²κ/4` for hyperbolic models; zero for Euclidean ones.
    /// `None` for curvature-driven models, where no closed form is available.
    pub fn spectrum_bottom(&self) -> Option<f64> {
        let n1 = (self.dimension - 1) as f64;
        match &self.kind {
            ModelKind::Euclidean => Some(0.0),
            ModelKind::Hyperbolic { kappa } => Some(n1 * n1 * kappa / 4.0),
            ModelKind::JacobiCurvature { .. } => None,
        }
    }

    /// Warping function and its derivative at `r ≥ 0`.
    pub fn warping(&self, r: f64) -> Result<(f64, f64)> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius must be a finite nonnegative number, got {r}")));
        }
        match &self.kind {
            ModelKind::Euclidean => Ok((r, 1.0)),
            ModelKind::Hyperbolic { kappa } => {
                let s = kappa.sqrt();
                Ok(((s * r).sinh() / s, (s * r).cosh()))
            }
            ModelKind::JacobiCurvature { .. } => self.jacobi_eval(r),
        }
    }

    /// `f'(r)/f(r)` for `r > 0`, evaluated without overflow for large radii.
    pub fn log_derivative(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("log-derivative needs r > 0, got {r}")));
        }
        match &self.kind {
            ModelKind::Euclidean => Ok(1.0 / r),
            ModelKind::Hyperbolic { kappa } => {
                let s = kappa.sqrt();
                Ok(s / (s * r).tanh())
            }
            ModelKind::JacobiCurvature { .. } => {
                let (f, df) = self.jacobi_eval(r)?;
                if !(f > 0.0) {
                    return Err(Error::InvalidModel(format!("warping vanished at r = {r}")));
                }
                Ok(df / f)
            }
        }
    }

    /// `ln f(r)` for `r > 0`, stable for large radii.
    pub fn log_warping(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("log-warping needs r > 0, got {r}")));
        }
        match &self.kind {
            ModelKind::Euclidean => Ok(r.ln()),
            ModelKind::Hyperbolic { kappa } => {
                let s = kappa.sqrt();
                let x = s * r;
                if x < 20.0 {
                    Ok((x.sinh() / s).ln())
                } else {
                    Ok(x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - s.ln())
                }
            }
            ModelKind::JacobiCurvature { .. } => Ok(self.jacobi_eval(r)?.0.ln()),
        }
    }

    /// Boundary area ω_{n-1} f(R)^{n-1} of the geodesic ball of radius `radius`.
    pub fn ball_area(&self, radius: f64) -> Result<f64> {
        let (f, _) = self.warping(radius)?;
        Ok(self.sphere_measure() * f.powi(self.dimension as i32 - 1))
    }

    /// Volume ω_{n-1} ∫₀ᴿ f^{n-1} of the geodesic ball, by adaptive quadrature.
    pub fn ball_volume(&self, radius: f64) -> Result<f64> {
        self.ball_volume_with_tol(radius, VOLUME_RTOL)
    }

    pub fn ball_volume_with_tol(&self, radius: f64, rtol: f64) -> Result<f64> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!("ball radius must be nonnegative, got {radius}")));
        }
        if radius == 0.0 {
            return Ok(0.0);
        }
        self.shell_volume(0.0, radius, rtol)
    }

    /// Volume of the annulus `a < r < b`.
    pub fn shell_volume(&self, a: f64, b: f64, rtol: f64) -> Result<f64> {
        if matches!(self.kind, ModelKind::JacobiCurvature { .. }) {
            // Make sure the cache covers the range before the integrand takes read locks.
            self.jacobi_eval(b)?;
        }
        let power = self.dimension as i32 - 1;
        let err = std::cell::Cell::new(None);
        let integral = quadrature::integrate(
            |t| match self.warping(t) {
                Ok((f, _)) => f.powi(power),
                Err(e) => {
                    err.set(Some(e));
                    f64::NAN
                }
            },
            a,
            b,
            rtol,
        );
        if let Some(e) = err.take() {
            return Err(e);
        }
        Ok(self.sphere_measure() * integral?)
    }

    pub fn ball(&self, radius: f64) -> Result<BallGeometry> {
        Ok(BallGeometry {
            radius,
            volume: self.ball_volume(radius)?,
            boundary_area: self.ball_area(radius)?,
        })
    }

    /// Radius of the geodesic ball with the given volume (safeguarded Newton on the
    /// strictly increasing volume function, whose derivative is the boundary area).
    pub fn radius_for_volume(&self, volume: f64) -> Result<f64> {
        if !(volume >= 0.0) || !volume.is_finite() {
            return Err(Error::Domain(format!("volume must be nonnegative, got {volume}")));
        }
        if volume == 0.0 {
            return Ok(0.0);
        }
        let n = self.dimension as f64;
        // Euclidean radius is an upper bound for K ≤ 0.
        let mut hi = (volume * n / self.sphere_measure()).powf(1.0 / n);
        let mut lo = 0.0;
        while self.ball_volume(hi)? < volume {
            lo = hi;
            hi *= 2.0;
        }
        let mut r = 0.5 * (lo + hi);
        for _ in 0..200 {
            let v = self.ball_volume(r)? - volume;
            if v == 0.0 {
                return Ok(r);
            }
            if v > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let a = self.ball_area(r)?;
            let mut next = r - v / a;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - r).abs() <= 1e-15 * r || hi - lo <= 1e-15 * hi {
                return Ok(next);
            }
            r = next;
        }
        Ok(r)
    }

    fn jacobi_eval(&self, r: f64) -> Result<(f64, f64)> {
        let cache = self.jacobi.as_ref().expect("curvature model carries a cache");
        {
            let table = cache.table.read().expect("jacobi cache lock poisoned");
            if let Some(v) = lookup(&table.nodes, r) {
                return Ok(v);
            }
        }
        let mut table = cache.table.write().expect("jacobi cache lock poisoned");
        if lookup(&table.nodes, r).is_none() {
            self.extend_jacobi(&mut table, r)?;
        }
        Ok(lookup(&table.nodes, r).expect("cache extended past r"))
    }

    fn extend_jacobi(&self, table: &mut JacobiTable, target: f64) -> Result<()> {
        let (curvature, h_max) = match &self.kind {
            ModelKind::JacobiCurvature { curvature, grid_resolution } => (curvature, *grid_resolution),
            _ => unreachable!("only curvature models carry a Jacobi cache"),
        };
        let last = *table.nodes.last().unwrap();
        let end = (target * 1.25).max(target + 1.0).max(last[0] + 1.0);
        let opts = OdeOptions { rtol: JACOBI_RTOL, atol: 1e-14, h_max, ..Default::default() };
        let mut fresh: Vec<[f64; 4]> = Vec::new();
        ode::integrate(
            |t, y: &[f64; 2]| Ok([y[1], -curvature.eval(t) * y[0]]),
            last[0],
            [last[1], last[2]],
            end,
            &opts,
            |_, step| {
                let k = curvature.eval(step.t);
                if !(k <= 0.0) {
                    return Err(Error::InvalidModel(format!(
                        "curvature must be nonpositive, K({}) = {k}",
                        step.t
                    )));
                }
                let [f, df] = step.y;
                if !(f > 0.0) || df < 1.0 - 1e-9 {
                    return Err(Error::InvalidModel(format!(
                        "warping lost convexity at r = {}: f = {f}, f' = {df}",
                        step.t
                    )));
                }
                fresh.push([step.t, f, df, -k * f]);
                Ok(Flow::Continue)
            },
        )
        .map_err(|e| match e {
            Error::Numeric(msg) => Error::Numeric(format!("Jacobi integration failed: {msg}")),
            other => other,
        })?;
        table.nodes.extend(fresh);
        Ok(())
    }
}

fn lookup(nodes: &[[f64; 4]], r: f64) -> Option<(f64, f64)> {
    let last = nodes.last()?;
    if r > last[0] {
        return None;
    }
    let i = match nodes.binary_search_by(|n| n[0].total_cmp(&r)) {
        Ok(i) => return Some((nodes[i][1], nodes[i][2])),
        Err(i) => i - 1,
    };
    let (a, b) = (nodes[i], nodes[i + 1]);
    let (f, _) = hermite(a[0], b[0], a[1], b[1], a[2], b[2], r);
    let (df, _) = hermite(a[0], b[0], a[2], b[2], a[3], b[3], r);
    Some((f, df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_warpings() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        assert_eq!(e2.warping(1.0).unwrap(), (1.0, 1.0));
        let h2 = WarpingModel::hyperbolic(2, 1.0).unwrap();
        let (f, df) = h2.warping(1.0).unwrap();
        assert!((f - 1.175201).abs() < 1e-6);
        assert!((df - 1.543081).abs() < 1e-6);
    }

    #[test]
    fn flat_jacobi_model_is_euclidean() {
        let m = WarpingModel::jacobi(2, Curvature::Constant { kappa: 0.0 }, None).unwrap();
        let (f, df) = m.warping(2.0).unwrap();
        assert!((f - 2.0).abs() < 1e-10);
        assert!((df - 1.0).abs() < 1e-10);
    }

    #[test]
    fn volumes_and_areas() {
        let e2 = WarpingModel::euclidean(2).unwrap();
        assert_relative_eq!(e2.ball_volume(1.0).unwrap(), PI, max_relative = 1e-12);
        assert_relative_eq!(e2.ball_area(1.0).unwrap(), 2.0 * PI, max_relative = 1e-14);
        let e3 = WarpingModel::euclidean(3).unwrap();
        assert_relative_eq!(e3.ball_area(2.0).unwrap(), 16.0 * PI, max_relative = 1e-14);
        let h2 = WarpingModel::hyperbolic(2, 1.0).unwrap();
        let v = h2.ball_volume(1.0).unwrap();
        assert_relative_eq!(v, 2.0 * PI * (1f64.cosh() - 1.0), max_relative = 1e-12);
        assert!((v - 3.41228).abs() < 1e-5);
        assert!((h2.ball_area(1.0).unwrap() - 7.38400).abs() < 1e-5);
    }

    #[test]
    fn small_balls_look_euclidean() {
        for m in [
            WarpingModel::hyperbolic(3, 2.0).unwrap(),
            WarpingModel::jacobi(4, Curvature::Power { a: 1.0, b: 1.0, exponent: 2.0 }, None).unwrap(),
        ] {
            let r: f64 = 1e-4;
            let n = m.dimension() as f64;
            let euclid = m.sphere_measure() * r.powf(n) / n;
            assert_relative_eq!(m.ball_volume(r).unwrap(), euclid, max_relative = 1e-6);
        }
        assert_eq!(WarpingModel::euclidean(2).unwrap().ball_volume(0.0).unwrap(), 0.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(WarpingModel::euclidean(1).is_err());
        assert!(WarpingModel::hyperbolic(2, 0.0).is_err());
        assert!(WarpingModel::jacobi(2, Curvature::Constant { kappa: -1.0 }, None).is_err());
        let e2 = WarpingModel::euclidean(2).unwrap();
        assert!(matches!(e2.warping(-1.0), Err(Error::Domain(_))));
        assert!(matches!(e2.ball_volume(-0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn positive_curvature_is_caught_during_integration() {
        let m = WarpingModel::jacobi(
            2,
            Curvature::Custom(Arc::new(|r: f64| if r > 1.0 { 0.5 } else { -1.0 })),
            None,
        )
        .unwrap();
        assert!(matches!(m.warping(3.0), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn radius_for_volume_inverts() {
        for m in [WarpingModel::euclidean(3).unwrap(), WarpingModel::hyperbolic(2, 1.0).unwrap()] {
            for r in [1e-3, 0.4, 3.0, 9.0] {
                let v = m.ball_volume(r).unwrap();
                assert_relative_eq!(m.radius_for_volume(v).unwrap(), r, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn log_helpers_are_consistent() {
        let h = WarpingModel::hyperbolic(3, 0.5).unwrap();
        for r in [0.3, 5.0, 30.0, 300.0] {
            let s = 0.5f64.sqrt();
            let expect = if r < 100.0 { ((s * r).sinh() / s).ln() } else { s * r - (2.0 * s).ln() };
            assert_relative_eq!(h.log_warping(r).unwrap(), expect, max_relative = 1e-12);
        }
        assert_relative_eq!(h.log_derivative(300.0).unwrap(), 0.5f64.sqrt(), max_relative = 1e-14);
    }
}
