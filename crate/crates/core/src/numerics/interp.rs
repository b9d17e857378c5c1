//! Piecewise cubic Hermite interpolation.

use crate::error::{Error, Result};

/// Cubic Hermite interpolant on one panel: value and derivative at `x`.
pub fn hermite(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64, x: f64) -> (f64, f64) {
    let h = x1 - x0;
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = (6.0 * s2 - 6.0 * s) / h;
    let dh10 = 3.0 * s2 - 4.0 * s + 1.0;
    let dh01 = (-6.0 * s2 + 6.0 * s) / h;
    let dh11 = 3.0 * s2 - 2.0 * s;
    let deriv = dh00 * y0 + dh10 * d0 + dh01 * y1 + dh11 * d1;
    (value, deriv)
}

/// Interior critical points of the Hermite cubic on (x0, x1).
pub fn hermite_critical_points(x0: f64, x1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> Vec<f64> {
    let h = x1 - x0;
    // Derivative in s ∈ [0,1] (times h): a s² + b s + c.
    let delta = y1 - y0;
    let a = -6.0 * delta + 3.0 * h * (d0 + d1);
    let b = 6.0 * delta - h * (4.0 * d0 + 2.0 * d1);
    let c = h * d0;
    let mut roots = Vec::new();
    if a.abs() < 1e-300 {
        if b.abs() > 1e-300 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            roots.push(q / a);
            if q != 0.0 {
                roots.push(c / q);
            }
        }
    }
    roots
        .into_iter()
        .filter(|s| *s > 0.0 && *s < 1.0)
        .map(|s| x0 + s * h)
        .collect()
}

/// Monotone piecewise-cubic interpolant using Steffen's derivative limiter.
///
/// For monotone data the interpolant is monotone between nodes and has no overshoot.
#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n != ys.len() {
            return Err(Error::Domain("abscissae and ordinates differ in length".into()));
        }
        if n < 2 {
            return Err(Error::Domain("monotone interpolation needs at least two samples".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("sample abscissae must be strictly increasing".into()));
        }
        let slopes: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let widths: Vec<f64> = (0..n - 1).map(|i| xs[i + 1] - xs[i]).collect();
        let mut ds = vec![0.0; n];
        for i in 1..n - 1 {
            let (s0, s1) = (slopes[i - 1], slopes[i]);
            let (h0, h1) = (widths[i - 1], widths[i]);
            if s0 * s1 <= 0.0 {
                ds[i] = 0.0;
                continue;
            }
            let p = (s0 * h1 + s1 * h0) / (h0 + h1);
            ds[i] = (s0.signum() + s1.signum())
                * s0.abs().min(s1.abs()).min(0.5 * p.abs());
        }
        // One-sided parabolic end derivatives, limited the same way.
        ds[0] = end_derivative(slopes[0], slopes.get(1).copied(), widths[0], widths.get(1).copied());
        ds[n - 1] = end_derivative(
            slopes[n - 2],
            if n > 2 { Some(slopes[n - 3]) } else { None },
            widths[n - 2],
            if n > 2 { Some(widths[n - 3]) } else { None },
        );
        Ok(MonotoneCubic { xs, ys, ds })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Value at `x`; `None` outside the sample range.
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (lo, hi) = self.x_range();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return Some(self.ys[i]),
            Err(i) => i - 1,
        };
        let (v, _) = hermite(
            self.xs[i],
            self.xs[i + 1],
            self.ys[i],
            self.ys[i + 1],
            self.ds[i],
            self.ds[i + 1],
            x,
        );
        Some(v)
    }
}

fn end_derivative(s0: f64, s1: Option<f64>, h0: f64, h1: Option<f64>) -> f64 {
    match (s1, h1) {
        (Some(s1), Some(h1)) => {
            let p = s0 * (1.0 + h0 / (h0 + h1)) - s1 * h0 / (h0 + h1);
            if p * s0 <= 0.0 {
                0.0
            } else if p.abs() > 2.0 * s0.abs() {
                2.0 * s0
            } else {
                p
            }
        }
        _ => s0,
    }
}
