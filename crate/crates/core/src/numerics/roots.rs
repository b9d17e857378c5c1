use crate::error::{Error, Result};

/// Bisection on a bracketing interval. `f(lo)` and `f(hi)` must differ in sign (zero counts
/// as either). Stops once the bracket is narrower than `xtol`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numeric(format!(
            "bisection needs a sign change on [{lo}, {hi}], got {flo:e} and {fhi:e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= xtol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection on a monotone predicate: `pred(lo)` false, `pred(hi)` true. Returns the
/// bracket `(lo, hi)` once its relative width drops below `rtol`.
pub fn bisect_predicate<P>(pred: P, mut lo: f64, mut hi: f64, rtol: f64) -> Result<(f64, f64)>
where
    P: Fn(f64) -> Result<bool>,
{
    for _ in 0..200 {
        if hi - lo <= rtol * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Safeguarded Newton iteration for an increasing function on a bracket.
///
/// `g` returns the residual and its derivative; `g(lo) ≤ 0 ≤ g(hi)` is assumed. Falls back to
/// bisection whenever a Newton step leaves the bracket.
pub fn newton_increasing<G>(g: G, mut lo: f64, mut hi: f64, ftol: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<(f64, f64)>,
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..300 {
        let (v, d) = g(x)?;
        if v.abs() <= ftol {
            return Ok(x);
        }
        if v > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let mut next = if d > 0.0 && d.is_finite() { x - v / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x.abs() || hi - lo <= 1e-15 * hi.abs() {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt2() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_missing_bracket() {
        assert!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-10).is_err());
    }

    #[test]
    fn newton_on_cubic() {
        let r = newton_increasing(|x| Ok((x * x * x - 5.0, 3.0 * x * x)), 0.0, 4.0, 1e-14).unwrap();
        assert!((r - 5f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn predicate_bracket_shrinks() {
        let (lo, hi) = bisect_predicate(|x| Ok(x > 3.25), 0.0, 8.0, 1e-12).unwrap();
        assert!(lo <= 3.25 && hi > 3.25 && hi - lo < 1e-11);
    }
}
