//! Model parameters and fundamental grids.
//!
//! Units follow the usual desk convention: time in years, the fundamental in
//! log units. Nothing here converts or checks units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar inputs of the target-zone model.
///
/// `alpha` is the expectation-updating frequency, `beta` the risk intensity
/// of the mean-preserving spread, `sigma` the diffusion scale and the band is
/// `[-f_bar, f_bar]`. `r_share` only enters the Ornstein–Uhlenbeck forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub sigma: f64,
    pub f_bar: f64,
    #[serde(alias = "horizon_T")]
    pub horizon: f64,
    #[serde(default)]
    pub r_share: f64,
}

impl ModelParams {
    /// Builds and validates a parameter set with `r_share = 0`.
    pub fn new(alpha: f64, beta: f64, sigma: f64, f_bar: f64, horizon: f64) -> Result<Self> {
        validate(ModelParams {
            alpha,
            beta,
            sigma,
            f_bar,
            horizon,
            r_share: 0.0,
        })
    }

    pub fn with_r_share(self, r_share: f64) -> Result<Self> {
        validate(ModelParams { r_share, ..self })
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        validate(ModelParams { beta, ..self })
    }

    pub fn with_f_bar(self, f_bar: f64) -> Result<Self> {
        validate(ModelParams { f_bar, ..self })
    }

    /// `beta^2 / 2 + alpha`, the decay floor of every transient mode.
    pub fn rho(&self) -> f64 {
        rho(self)
    }

    /// Robin constant `beta * f_bar * tanh(beta * f_bar)` of the boundary
    /// condition in reduced coordinates.
    pub fn robin_constant(&self) -> f64 {
        let x = self.beta * self.f_bar;
        x * x.tanh()
    }
}

/// Returns the parameters unchanged if every invariant holds, otherwise a
/// domain error naming the first violated one.
pub fn validate(params: ModelParams) -> Result<ModelParams> {
    let ModelParams {
        alpha,
        beta,
        sigma,
        f_bar,
        horizon,
        r_share,
    } = params;
    let checks: [(bool, &str); 6] = [
        (alpha.is_finite() && alpha > 0.0, "alpha must be positive"),
        (sigma.is_finite() && sigma > 0.0, "sigma must be positive"),
        (f_bar.is_finite() && f_bar > 0.0, "f_bar must be positive"),
        (horizon.is_finite() && horizon > 0.0, "horizon must be positive"),
        (beta.is_finite() && beta >= 0.0, "beta must be non-negative"),
        (
            r_share.is_finite() && (0.0..1.0).contains(&r_share),
            "r_share must lie in [0, 1)",
        ),
    ];
    if let Some((_, msg)) = checks.iter().find(|(ok, _)| !ok) {
        return Err(Error::domain(*msg));
    }
    let r = rho(&params);
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::domain("rho must be finite and positive"));
    }
    Ok(params)
}

pub fn rho(params: &ModelParams) -> f64 {
    0.5 * params.beta * params.beta + params.alpha
}

/// Uniform grid of fundamental values whose endpoints are exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    spacing: f64,
}

impl Grid {
    /// `n` points covering `[lo, hi]`.
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("a grid needs at least two points"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::domain("grid bounds must be finite with lo < hi"));
        }
        let spacing = (hi - lo) / (n - 1) as f64;
        let mut points: Vec<f64> = (0..n).map(|i| lo + i as f64 * spacing).collect();
        points[n - 1] = hi;
        Ok(Grid { points, spacing })
    }

    /// `n` points covering the band `[-f_bar, f_bar]`.
    pub fn band(params: &ModelParams, n: usize) -> Result<Self> {
        Grid::new(-params.f_bar, params.f_bar, n)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        self.points[self.points.len() - 1]
    }
}
