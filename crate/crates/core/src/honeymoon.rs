//! Contact-point analysis for smooth fitting inside the band.
//!
//! For Gaussian fundamentals the trial curve `f + a sinh(rho0 f)` touches the
//! level `F` with zero slope at the unique `W > F` solving
//! `W - F = tanh(rho0 W) / rho0`. With risk the trial curve becomes
//! `f + a sinh(m f) / cosh(beta f) + omega tanh(beta f)` and the critical point
//! `W_c` is the first positive zero of
//! `Delta(W) = rho_b tanh(rho_b W) - beta tanh(beta W)`, `rho_b = sqrt(beta^2 + 4 alpha)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots;
use crate::spectral::Regime;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoneymoonVerdict {
    Applicable,
    NotApplicable,
    /// The contact point could not be located.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    /// Contact point of the smooth fit, if one was found.
    pub w: Option<f64>,
    /// Smallest positive zero of `Delta`, if any.
    pub w_critical: Option<f64>,
    /// Ordering rule alone: `W_c >= W`, with a missing `W_c` read as infinite.
    pub ordering_holds: Option<bool>,
    pub regime: Regime,
    pub verdict: HoneymoonVerdict,
    /// `(W, Delta(W))` samples used for the `W_c` scan.
    pub delta_profile: Vec<(f64, f64)>,
}

impl ContactReport {
    pub fn applicable(&self) -> Option<bool> {
        match self.verdict {
            HoneymoonVerdict::Applicable => Some(true),
            HoneymoonVerdict::NotApplicable => Some(false),
            HoneymoonVerdict::Inconclusive => None,
        }
    }
}

fn rho0(params: &ModelParams) -> f64 {
    (2.0 * params.alpha).sqrt() / params.sigma
}

/// Contact point for Gaussian fundamentals.
pub fn gaussian_contact(level: f64, params: &ModelParams) -> Result<f64> {
    if params.beta != 0.0 {
        return Err(Error::domain("the Gaussian contact point requires beta = 0"));
    }
    if !(level.is_finite() && level > 0.0) {
        return Err(Error::domain("F must be positive"));
    }
    let r = rho0(params);
    let g = |w: f64| w - level - (r * w).tanh() / r;
    let w = roots::bisect(g, level, level + 1.0 / r, 1e-10 * (level + 1.0 / r))?;
    roots::newton_bisect(
        |w| {
            let t = (r * w).tanh();
            (w - level - t / r, t * t)
        },
        (w - 1e-9 * w).max(level),
        level + 1.0 / r,
        1e-15 * level.max(1.0),
    )
}

/// `Delta(W)` at one point.
pub fn delta(params: &ModelParams, w: f64) -> f64 {
    let beta = params.beta;
    let rb = (beta * beta + 4.0 * params.alpha).sqrt();
    rb * (rb * w).tanh() - beta * (beta * w).tanh()
}

pub fn delta_profile(params: &ModelParams, w_grid: &[f64]) -> Vec<f64> {
    w_grid.iter().map(|&w| delta(params, w)).collect()
}

/// Smooth-fit residual in `W` after eliminating `a`.
fn contact_residual(params: &ModelParams, level: f64, omega: f64, w: f64) -> f64 {
    let beta = params.beta;
    let m = (beta * beta + 2.0 * params.alpha).sqrt() / params.sigma;
    let tb = (beta * w).tanh();
    let tm = (m * w).tanh();
    let lift = 1.0 + omega * beta * (1.0 - tb * tb);
    w + omega * tb - level - lift * tm / (m - beta * tm * tb)
}

fn find_contact(params: &ModelParams, level: f64, omega: f64, upper: f64) -> Option<f64> {
    let n = 4000;
    let g = |w: f64| contact_residual(params, level, omega, w);
    let mut prev = (0.0, g(0.0));
    for i in 1..=n {
        let w = upper * i as f64 / n as f64;
        let v = g(w);
        if v.is_finite() && prev.1.is_finite() && v.signum() != prev.1.signum() {
            if let Ok(root) = roots::bisect(g, prev.0, w, 1e-15 * upper) {
                let scale = 1.0 + level.abs() + root.abs();
                if root > 0.0 && g(root).abs() < 1e-9 * scale {
                    return Some(root);
                }
            }
        }
        prev = (w, v);
    }
    None
}

/// Contact point, critical point and verdict at level `F`, with the
/// coefficient `omega` of the `tanh(beta f)` trial term.
///
/// The verdict needs both the ordering `W_c >= W` and the diffusive regime;
/// a missing contact point is inconclusive unless the regime already rules
/// smooth fitting out.
pub fn classify_honeymoon(params: &ModelParams, level: f64, omega: f64) -> Result<ContactReport> {
    if !(level.is_finite() && level > 0.0) {
        return Err(Error::domain("F must be positive"));
    }
    if !omega.is_finite() {
        return Err(Error::domain("omega must be finite"));
    }
    let m = (params.beta.powi(2) + 2.0 * params.alpha).sqrt() / params.sigma;
    // far from the band the residual behaves like W - F - 1/(m - beta)
    let reach = if m > params.beta { 4.0 / (m - params.beta) } else { 0.0 };
    let upper = (10.0 * (level + 1.0 / m + omega.abs()) + reach).min(1e6);
    let w = find_contact(params, level, omega, upper);

    let n = 2000;
    let delta_profile: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let x = upper * i as f64 / n as f64;
            (x, delta(params, x))
        })
        .collect();
    let w_critical = delta_profile.windows(2).find_map(|p| {
        let (a, b) = (p[0], p[1]);
        if a.0 > 0.0 && a.1.signum() != b.1.signum() {
            roots::bisect(|x| delta(params, x), a.0, b.0, 1e-15 * upper).ok()
        } else {
            None
        }
    });

    let regime = Regime::of(params);
    let ordering_holds = w.map(|w| w_critical.is_none_or(|wc| wc >= w));
    let verdict = match (regime, ordering_holds) {
        (Regime::Shifted, _) | (_, Some(false)) => HoneymoonVerdict::NotApplicable,
        (Regime::Diffusive, Some(true)) => HoneymoonVerdict::Applicable,
        (Regime::Diffusive, None) => HoneymoonVerdict::Inconclusive,
    };
    Ok(ContactReport {
        w,
        w_critical,
        ordering_holds,
        regime,
        verdict,
        delta_profile,
    })
}
