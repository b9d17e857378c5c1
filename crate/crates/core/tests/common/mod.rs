//! Independent reference values used by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

/// `J_ν(x)` for integer `ν ≥ 0` by its power series; accurate to roundoff for `x ≤ 10`.
pub fn bessel_j(nu: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = half.powi(nu as i32) / (1..=nu).map(f64::from).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= -half * half / (k as f64 * (k + nu) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// First positive zero of `J_0`, by Newton's method with `J_0' = -J_1`.
pub fn first_bessel_zero() -> f64 {
    let mut x = 2.4;
    for _ in 0..50 {
        let step = bessel_j(0, x) / -bessel_j(1, x);
        x -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    x
}

/// Sharp isoperimetric profile of the hyperbolic plane, `H(v) = √(4πv + v²)`.
pub fn hyperbolic_plane_profile(v: f64) -> f64 {
    (4.0 * std::f64::consts::PI * v + v * v).sqrt()
}

/// Location of the shipped sharp hyperbolic-plane profile table.
pub fn sharp_table() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/hyperbolic_plane_sharp.csv")
}

pub fn acceptance_config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/acceptance.json")
}

/// `n` log-spaced points on `[lo, hi]`.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

#[test]
fn oracle_self_check() {
    let j = first_bessel_zero();
    assert!((j - 2.404825557695773).abs() < 1e-14);
    assert!((bessel_j(1, j) - 0.5191474972894669).abs() < 1e-14);
}
