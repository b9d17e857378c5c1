use std::f64::consts::PI;

/// Γ(x) for positive integers and half-integers, by the recurrence Γ(x + 1) = xΓ(x).
///
/// Returns `None` for any other argument.
pub fn gamma_half_integer(x: f64) -> Option<f64> {
    let twice = 2.0 * x;
    if !(x > 0.0) || twice.fract() != 0.0 || twice > 340.0 {
        return None;
    }
    let (mut value, mut arg) = if (twice as u64).is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while arg < x {
        value *= arg;
        arg += 1.0;
    }
    Some(value)
}

/// Total measure of the unit (n-1)-sphere in ℝⁿ, 2π^{n/2}/Γ(n/2).
pub fn unit_sphere_measure(n: u32) -> f64 {
    let half = n as f64 / 2.0;
    2.0 * PI.powf(half) / gamma_half_integer(half).expect("n/2 is a half-integer")
}

/// Volume of the unit ball in ℝⁿ, π^{n/2}/Γ(n/2 + 1).
pub fn unit_ball_volume(n: u32) -> f64 {
    unit_sphere_measure(n) / n as f64
}
