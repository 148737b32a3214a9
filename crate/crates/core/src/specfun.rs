//! Overflow-safe hyperbolic ratios and the confluent hypergeometric function.

use crate::error::{Error, Result};

const MAX_TERMS: usize = 10_000;
const LN_MAX: f64 = 709.782_712_893_384;

/// `tanh(beta * f)`; saturates cleanly at `±1`.
pub fn tanh_ratio(beta: f64, f: f64) -> f64 {
    (beta * f).tanh()
}

/// `sinh(rho * f) / cosh(beta * f)` evaluated in scaled form, so the result
/// is finite whenever the true ratio is.
pub fn sinh_over_cosh_scaled(rho: f64, beta: f64, f: f64) -> Result<f64> {
    let s = rho * f;
    if s == 0.0 {
        return Ok(0.0);
    }
    let sa = s.abs();
    let ta = (beta * f).abs();
    let num = -(-2.0 * sa).exp_m1();
    let den = 1.0 + (-2.0 * ta).exp();
    let log_mag = (sa - ta) + num.ln() - den.ln();
    if log_mag > LN_MAX {
        return Err(Error::Overflow(format!(
            "sinh({rho}*{f})/cosh({beta}*{f}) exceeds the f64 range"
        )));
    }
    let mag = if sa - ta > LN_MAX - 1.0 {
        log_mag.exp()
    } else {
        (sa - ta).exp() * num / den
    };
    Ok(s.signum() * mag)
}

/// `exp(x) / cosh(beta * f)` without forming either factor on its own.
pub fn exp_over_cosh(x: f64, beta: f64, f: f64) -> f64 {
    let ta = (beta * f).abs();
    2.0 * (x - ta).exp() / (1.0 + (-2.0 * ta).exp())
}

/// Kummer's confluent hypergeometric function `1F1(a; b; x)`.
///
/// Taylor series with Neumaier-compensated summation; negative arguments go
/// through Kummer's transformation `1F1(a; b; x) = e^x 1F1(b - a; b; -x)`.
pub fn kummer_1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && x.is_finite()) {
        return Err(Error::domain("1F1 arguments must be finite"));
    }
    if b <= 0.0 && b == b.round() {
        return Err(Error::domain(format!(
            "1F1 is undefined for non-positive integer b = {b}"
        )));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < 0.0 {
        return Ok(x.exp() * series(b - a, b, -x)?);
    }
    series(a, b, x)
}

fn series(a: f64, b: f64, x: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    let floor = a.abs() + b.abs() + x.abs();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * x / (nf + 1.0);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        if nf > floor && term.abs() < 1e-16 * (sum + comp).abs() {
            return Ok(sum + comp);
        }
        if !sum.is_finite() {
            return Err(Error::Overflow(format!("1F1({a}; {b}; {x}) overflowed")));
        }
    }
    Err(Error::Convergence(format!(
        "1F1({a}; {b}; {x}) needs more than {MAX_TERMS} terms"
    )))
}
