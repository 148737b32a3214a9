//! Scalar root finding on a known sign-changing bracket.

use crate::error::{Error, Result};

/// Safeguarded Newton iteration on `[lo, hi]`.
///
/// `fdf` returns the function value and derivative. The bracket is kept
/// up to date and a bisection step replaces any Newton step that leaves it
/// or fails to halve the residual. Stops when `|f| <= ftol` or the bracket
/// has shrunk to adjacent doubles; in the latter case the better endpoint
/// is returned.
pub fn newton_bisect<F>(mut fdf: F, lo: f64, hi: f64, ftol: f64) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, _) = fdf(a);
    let (fb, _) = fdf(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}] ({fa}, {fb})"
        )));
    }
    let mut x = 0.5 * (a + b);
    let mut best = (f64::INFINITY, x);
    let mut last_f = f64::INFINITY;
    for _ in 0..400 {
        let (fx, dfx) = fdf(x);
        if fx.abs() < best.0 {
            best = (fx.abs(), x);
        }
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            return Ok(best.1);
        }
        let step = x - fx / dfx;
        let inside = step.is_finite() && step > a.min(b) && step < a.max(b);
        x = if inside && fx.abs() < 0.5 * last_f {
            step
        } else {
            mid
        };
        last_f = fx.abs();
    }
    Err(Error::Convergence(format!(
        "root on [{lo}, {hi}] not resolved, best residual {}",
        best.0
    )))
}

/// Plain bisection to bracket width `xtol`.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let fa0 = f(a);
    let fb0 = f(b);
    if fa0 == 0.0 {
        return Ok(a);
    }
    if fb0 == 0.0 {
        return Ok(b);
    }
    if fa0.signum() == fb0.signum() {
        return Err(Error::Bracket(format!("no sign change on [{lo}, {hi}]")));
    }
    let mut fa = fa0;
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
