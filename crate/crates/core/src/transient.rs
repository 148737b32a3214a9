//! Finite-horizon solution `X(t, f) = X*(T - t, f) + X_S(f)` as an
//! eigenfunction expansion
//! `X*(tau, f) = (1 / cosh(beta f)) sum_k c_k exp(-(omega_k^2 + rho) tau) sin(u_k f / f_bar)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Grid, ModelParams};
use crate::quad;
use crate::spectral::{build_spectrum, Spectrum};
use crate::stationary::{StationaryKind, StationarySolution};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectionMode {
    /// `c_k = -(1/f_bar) int X_S sin(u_k f / f_bar) df`.
    PaperLiteral,
    /// `c_k = -int X_S cosh(beta f) psi_k df / int psi_k^2 df`, which makes
    /// `X(T, f) = 0` hold in the limit of many modes.
    #[default]
    ExactProjection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransientSolution {
    pub spectrum: Spectrum,
    pub coeffs: Vec<f64>,
    pub stationary: StationarySolution,
    pub mode: ProjectionMode,
    pub truncation_k: usize,
}

fn check_compatible(sol: &StationarySolution, spectrum: &Spectrum) -> Result<()> {
    if sol.params != spectrum.params {
        return Err(Error::domain(
            "stationary solution and spectrum use different parameters",
        ));
    }
    if sol.kind == StationaryKind::Ou {
        return Err(Error::domain(
            "the sine expansion needs a risk-adjusted or Gaussian stationary solution",
        ));
    }
    let fb = sol.params.f_bar;
    if (sol.lo + fb).abs() > 1e-12 || (sol.hi - fb).abs() > 1e-12 {
        return Err(Error::domain("the sine expansion needs the symmetric band"));
    }
    Ok(())
}

/// `int_{-f_bar}^{f_bar} sin^2(u f / f_bar) df`.
pub fn mode_norm(u: f64, f_bar: f64) -> f64 {
    f_bar - f_bar * (2.0 * u).sin() / (2.0 * u)
}

fn panels_for(u: f64) -> usize {
    (u / (2.0 * std::f64::consts::PI)).ceil() as usize + 1
}

/// Projection coefficients of the terminal condition on every mode.
pub fn fourier_coeffs(
    sol: &StationarySolution,
    spectrum: &Spectrum,
    mode: ProjectionMode,
) -> Result<Vec<f64>> {
    check_compatible(sol, spectrum)?;
    let fb = sol.params.f_bar;
    let beta = sol.params.beta;
    spectrum
        .roots
        .par_iter()
        .map(|&u| {
            let k = u / fb;
            let n = panels_for(u);
            match mode {
                ProjectionMode::PaperLiteral => {
                    let i = quad::integrate(
                        |f| sol.value(f).unwrap_or(f64::NAN) * (k * f).sin(),
                        -fb,
                        fb,
                        n,
                    )?;
                    Ok(-i / fb)
                }
                ProjectionMode::ExactProjection => {
                    let i = quad::integrate(
                        |f| {
                            sol.value(f).unwrap_or(f64::NAN) * (beta * f).cosh() * (k * f).sin()
                        },
                        -fb,
                        fb,
                        n,
                    )?;
                    Ok(-i / mode_norm(u, fb))
                }
            }
        })
        .collect()
}

impl TransientSolution {
    /// Builds spectrum, stationary solution and coefficients for `params`.
    pub fn new(params: &ModelParams, k_max: usize, mode: ProjectionMode) -> Result<Self> {
        let spectrum = build_spectrum(params, k_max)?;
        let stationary = crate::stationary::solve_smooth_pasting(params)?;
        Self::from_parts(spectrum, stationary, mode)
    }

    pub fn from_parts(
        spectrum: Spectrum,
        stationary: StationarySolution,
        mode: ProjectionMode,
    ) -> Result<Self> {
        let coeffs = fourier_coeffs(&stationary, &spectrum, mode)?;
        Ok(TransientSolution {
            truncation_k: coeffs.len(),
            spectrum,
            coeffs,
            stationary,
            mode,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.spectrum.params
    }

    /// `X*(tau, f)` with `tau = T - t`.
    pub fn decaying_part(&self, tau: f64, f: f64) -> f64 {
        let p = self.params();
        let rho = p.rho();
        let mut s = 0.0;
        for (&c, (&w, &u)) in self
            .coeffs
            .iter()
            .zip(self.spectrum.eigenvalues.iter().zip(self.spectrum.roots.iter()))
            .take(self.truncation_k)
        {
            s += c * (-(w * w + rho) * tau).exp() * (u * f / p.f_bar).sin();
        }
        s / (p.beta * f).cosh()
    }

    /// Full solution at calendar time `t`.
    pub fn value(&self, t: f64, f: f64) -> Result<f64> {
        let p = self.params();
        if !(0.0..=p.horizon).contains(&t) {
            return Err(Error::domain(format!(
                "t = {t} lies outside [0, {}]",
                p.horizon
            )));
        }
        let xs = self.stationary.value(f)?;
        Ok(self.decaying_part(p.horizon - t, f) + xs)
    }
}

pub fn eval_transient(ts: &TransientSolution, t: f64, f: f64) -> Result<f64> {
    ts.value(t, f)
}

/// `X(t_i, f_j)`, one row per time.
pub fn surface(ts: &TransientSolution, t_grid: &[f64], f_grid: &Grid) -> Result<Vec<Vec<f64>>> {
    t_grid
        .iter()
        .map(|&t| f_grid.points().iter().map(|&f| ts.value(t, f)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(beta: f64) -> ModelParams {
        ModelParams::new(0.8, beta, 1.0, 0.1, 3.0).unwrap()
    }

    #[test]
    fn centre_is_fixed() {
        let ts = TransientSolution::new(&params(1.0), 20, ProjectionMode::ExactProjection).unwrap();
        for t in [0.0, 1.5, 2.99, 3.0] {
            assert!(ts.value(t, 0.0).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn modes_agree_without_risk() {
        let p = params(0.0);
        let a = TransientSolution::new(&p, 30, ProjectionMode::ExactProjection).unwrap();
        let b = TransientSolution::new(&p, 30, ProjectionMode::PaperLiteral).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_checks() {
        let ts = TransientSolution::new(&params(1.0), 5, ProjectionMode::ExactProjection).unwrap();
        assert!(ts.value(-0.1, 0.0).is_err());
        assert!(ts.value(3.1, 0.0).is_err());
        assert!(ts.value(1.0, 0.11).is_err());
    }

    #[test]
    fn mismatched_parts_rejected() {
        let s = build_spectrum(&params(1.0), 5).unwrap();
        let st = crate::stationary::solve_smooth_pasting(&params(2.0)).unwrap();
        assert!(TransientSolution::from_parts(s, st, ProjectionMode::ExactProjection).is_err());
    }
}
