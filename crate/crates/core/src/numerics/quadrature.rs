//! Adaptive Gauss-Legendre quadrature.
//!
//! Each panel is integrated with a fixed 10-point Gauss rule. The error on a panel is
//! estimated by comparing that value with the sum over its two halves; the panel with
//! the largest estimated error is bisected until the global estimate meets the
//! requested relative tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const GAUSS_ORDER: usize = 10;
const MAX_PANELS: usize = 20_000;

/// Nodes and weights of the Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre() -> &'static ([f64; GAUSS_ORDER], [f64; GAUSS_ORDER]) {
    static RULE: OnceLock<([f64; GAUSS_ORDER], [f64; GAUSS_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let mut nodes = [0.0; GAUSS_ORDER];
        let mut weights = [0.0; GAUSS_ORDER];
        for i in 0..n {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed-order Gauss rule on [a, b].
pub fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + half * x);
    }
    sum * half
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn make_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let whole = gauss_panel(f, a, b);
    let m = 0.5 * (a + b);
    let split = gauss_panel(f, a, m) + gauss_panel(f, m, b);
    Panel {
        a,
        b,
        value: split,
        error: (whole - split).abs(),
    }
}

/// Integrates `f` over [a, b] to relative tolerance `rtol`.
///
/// The target never drops below a few hundred ulps of `Σ|panel values|`, the level at
/// which the error estimate itself is roundoff.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, rtol).map(|v| -v);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    let mut heap = BinaryHeap::new();
    let first = make_panel(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::Numeric(format!("non-finite integrand on [{a}, {b}]")));
    }
    let mut total = first.value;
    let mut err = first.error;
    let mut magnitude = first.value.abs();
    heap.push(first);
    let mut panels = 1;
    loop {
        let target = (rtol * total.abs()).max(256.0 * f64::EPSILON * magnitude).max(f64::MIN_POSITIVE);
        if err <= target {
            break;
        }
        let worst = heap.pop().expect("heap never empties");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // Panel collapsed to floating point resolution; accept what we have.
            heap.push(worst);
            break;
        }
        let left = make_panel(&f, worst.a, m);
        let right = make_panel(&f, m, worst.b);
        if !(left.value.is_finite() && right.value.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite integrand near [{}, {}]",
                worst.a, worst.b
            )));
        }
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        magnitude += left.value.abs() + right.value.abs() - worst.value.abs();
        heap.push(left);
        heap.push(right);
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Numeric(format!(
                "quadrature on [{a}, {b}] did not converge: estimated error {err:e} after {panels} panels"
            )));
        }
        if heap.len().is_multiple_of(64) {
            // Re-sum to keep the running totals free of cancellation drift.
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
            magnitude = heap.iter().map(|p| p.value.abs()).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}
