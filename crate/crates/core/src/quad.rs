//! Adaptive Gauss–Legendre quadrature on 61-point panels.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 61;
const MAX_DEPTH: u32 = 30;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        nodes[n / 2] = 0.0;
        Rule { nodes, weights }
    })
}

/// Legendre polynomial `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (x, w) in r.nodes.iter().zip(r.weights.iter()) {
        s += w * f(mid + half * x);
    }
    s * half
}

/// Integrates `f` over `[a, b]`, starting from `panels` equal panels and
/// halving any panel whose two-half estimate disagrees with the whole by
/// more than `max(1e-12, 1e-12 |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> Result<f64> {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == panels { b } else { lo + h };
        total += refine(&f, lo, hi, panel(&f, lo, hi), 0)?;
    }
    Ok(total)
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let split = left + right;
    if !split.is_finite() {
        return Err(Error::Convergence(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    if (whole - split).abs() <= 1e-12f64.max(1e-12 * split.abs()) {
        return Ok(split);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Convergence(format!(
            "quadrature did not settle on [{a}, {b}]"
        )));
    }
    Ok(refine(f, a, m, left, depth + 1)? + refine(f, m, b, right, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = rule().weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        // degree 120 is integrated exactly by a 61-point rule
        let got = integrate(|x| x.powi(120), -1.0, 1.0, 1).unwrap();
        assert!((got - 2.0 / 121.0).abs() < 1e-15);
    }

    #[test]
    fn oscillatory_sine() {
        let w = 300.0;
        let got = integrate(|x| (w * x).sin().powi(2), 0.0, 1.0, 50).unwrap();
        let want = 0.5 - (2.0 * w).sin() / (4.0 * w);
        assert!((got - want).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand_is_refined() {
        let got = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1).unwrap();
        let want = 2.0 * (1.0 / 1e-2f64).atan() / 1e-2;
        assert!(((got - want) / want).abs() < 1e-11);
    }
}
