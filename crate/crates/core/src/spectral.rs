//! Eigenvalues of the Robin problem on the band and the quantities built
//! from them.
//!
//! In reduced coordinates `u = sqrt(2) * omega * f_bar / sigma` the
//! eigenvalue condition reads `u cot(u) = c` with
//! `c = beta f_bar tanh(beta f_bar)`. For `c < 1` the first root sits in
//! `(0, pi/2]`; once `c` reaches 1 that root disappears and every root moves
//! up one bracket, which is the regime shift.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Diffusive,
    Shifted,
}

impl Regime {
    pub fn of(params: &ModelParams) -> Regime {
        if params.robin_constant() >= 1.0 {
            Regime::Shifted
        } else {
            Regime::Diffusive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Diffusive => "diffusive",
            Regime::Shifted => "shifted",
        }
    }
}

/// Ordered eigenvalues together with the reduced roots and brackets they
/// came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub params: ModelParams,
    pub eigenvalues: Vec<f64>,
    /// Roots in `u` coordinates.
    pub roots: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
    pub regime: Regime,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// The spectral gap.
    pub fn omega1(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Decay rate `omega_k^2 + rho` of mode `k` (zero based).
    pub fn decay_rate(&self, k: usize) -> f64 {
        self.eigenvalues[k].powi(2) + self.params.rho()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub omega1: f64,
    pub t_relax: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub feasible: bool,
    pub regime: Regime,
    /// Whether `lower_bound <= t_relax <= upper_bound`.
    pub within_bounds: bool,
}

fn reduced(omega: f64, params: &ModelParams) -> f64 {
    SQRT_2 * omega * params.f_bar / params.sigma
}

fn omega_from_u(u: f64, params: &ModelParams) -> f64 {
    params.sigma * u / (SQRT_2 * params.f_bar)
}

/// `(sqrt(2) omega / sigma) cot(sqrt(2) omega f_bar / sigma) - beta tanh(beta f_bar)`.
pub fn eigen_residual(omega: f64, params: &ModelParams) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::domain("omega must be positive"));
    }
    let u = reduced(omega, params);
    let m = (u / PI).round();
    if m >= 1.0 && (u - m * PI).abs() <= 1e-12 * u.max(1.0) {
        return Err(Error::Pole(format!(
            "u = {u} is a multiple of pi; cot is singular"
        )));
    }
    let k = SQRT_2 * omega / params.sigma;
    let (s, c) = u.sin_cos();
    Ok(k * c / s - params.beta * (params.beta * params.f_bar).tanh())
}

/// Bracket in `u` holding the `k`-th root (one based).
pub fn bracket(k: usize, params: &ModelParams) -> (f64, f64) {
    let m = match Regime::of(params) {
        Regime::Diffusive => k - 1,
        Regime::Shifted => k,
    } as f64;
    (m * PI, m * PI + FRAC_PI_2)
}

/// Root `u_k` of `u cot(u) = c` in its bracket.
fn solve_reduced(k: usize, params: &ModelParams) -> Result<(f64, (f64, f64))> {
    let c = params.robin_constant();
    let (lo, hi) = bracket(k, params);
    if c == 0.0 {
        return Ok((hi, (lo, hi)));
    }
    // u cot u - c, written as (u cos u - c sin u) / sin u; the bracket
    // keeps sin u away from zero except at its open left end.
    let phi = |u: f64| {
        let (s, co) = u.sin_cos();
        let v = u * co / s - c;
        let d = (s * co - u) / (s * s);
        (v, d)
    };
    // push the left end inside the open interval
    let start = if lo == 0.0 {
        1e-8f64.min(0.5 * hi)
    } else {
        let mut a = lo + lo * 4.0 * f64::EPSILON;
        while phi(a).0 <= 0.0 || !phi(a).0.is_finite() {
            a = 0.5 * (a + hi);
            if a >= hi {
                return Err(Error::Bracket(format!("bracket ({lo}, {hi}] degenerate")));
            }
        }
        a
    };
    let u = roots::newton_bisect(phi, start, hi, 1e-13)?;
    Ok((u, (lo, hi)))
}

/// Moves `omega` across neighbouring doubles to the representable value with
/// the smallest residual.
fn polish(omega: f64, params: &ModelParams) -> f64 {
    let mut best = omega;
    let mut best_r = eigen_residual(omega, params).map_or(f64::INFINITY, f64::abs);
    let mut cand = omega;
    let mut down = omega;
    for _ in 0..16 {
        cand = next_up(cand);
        down = next_down(down);
        for x in [cand, down] {
            if let Ok(r) = eigen_residual(x, params) {
                if r.abs() < best_r {
                    best_r = r.abs();
                    best = x;
                }
            }
        }
    }
    best
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

fn next_down(x: f64) -> f64 {
    f64::from_bits(x.to_bits() - 1)
}

/// The `k`-th eigenvalue (one based).
pub fn solve_eigenvalue(k: usize, params: &ModelParams) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("eigenvalue index starts at 1"));
    }
    let (u, _) = solve_reduced(k, params)?;
    Ok(polish(omega_from_u(u, params), params))
}

/// The first `k_max` eigenvalues in increasing order.
pub fn build_spectrum(params: &ModelParams, k_max: usize) -> Result<Spectrum> {
    if k_max == 0 {
        return Err(Error::domain("a spectrum needs at least one eigenvalue"));
    }
    let mut eigenvalues = Vec::with_capacity(k_max);
    let mut roots = Vec::with_capacity(k_max);
    let mut brackets = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let (u, br) = solve_reduced(k, params)?;
        eigenvalues.push(polish(omega_from_u(u, params), params));
        roots.push(u);
        brackets.push(br);
    }
    Ok(Spectrum {
        params: *params,
        eigenvalues,
        roots,
        brackets,
        regime: Regime::of(params),
    })
}

/// Relaxation time `1 / (omega_1^2 + rho)` and the band estimates
/// `[(pi/f_bar)^2 + rho]^-1` and `[(pi/(2 f_bar))^2 + rho]^-1`.
pub fn relaxation_time(spectrum: &Spectrum) -> FeasibilityReport {
    let p = &spectrum.params;
    let rho = p.rho();
    let omega1 = spectrum.omega1();
    let t_relax = 1.0 / (omega1 * omega1 + rho);
    let lower_bound = 1.0 / ((PI / p.f_bar).powi(2) + rho);
    let upper_bound = 1.0 / ((PI / (2.0 * p.f_bar)).powi(2) + rho);
    FeasibilityReport {
        omega1,
        t_relax,
        lower_bound,
        upper_bound,
        feasible: p.horizon >= t_relax,
        regime: spectrum.regime,
        within_bounds: lower_bound <= t_relax && t_relax <= upper_bound,
    }
}

/// Positive root of `x tanh(x) = 1`.
pub fn threshold_constant() -> f64 {
    static X: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *X.get_or_init(|| {
        roots::newton_bisect(
            |x| {
                let t = x.tanh();
                (x * t - 1.0, t + x * (1.0 - t * t))
            },
            1.0,
            1.5,
            1e-16,
        )
        .expect("x tanh x - 1 changes sign on [1, 1.5]")
    })
}

/// Risk intensity at which the regime shifts for the band of `params`.
pub fn regime_threshold(params: &ModelParams) -> f64 {
    threshold_constant() / params.f_bar
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub beta: f64,
    pub omega1: f64,
    pub t_relax: f64,
    pub regime: Regime,
}

/// Gap and relaxation time along an ascending grid of risk intensities.
pub fn regime_scan(params: &ModelParams, beta_grid: &[f64]) -> Result<Vec<ScanRow>> {
    if beta_grid.is_empty() {
        return Err(Error::domain("beta grid is empty"));
    }
    if beta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("beta grid must be strictly ascending"));
    }
    beta_grid
        .iter()
        .map(|&beta| {
            let p = params.with_beta(beta)?;
            let s = build_spectrum(&p, 1)?;
            let r = relaxation_time(&s);
            Ok(ScanRow {
                beta,
                omega1: r.omega1,
                t_relax: r.t_relax,
                regime: r.regime,
            })
        })
        .collect()
}

/// Exact spectrum of the softly attractive drift: cosine modes with
/// `omega_k = (2k+1) pi / (2 sqrt(2) f_bar)`, `k = 0, 1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftSpectrum {
    pub params: ModelParams,
    pub eigenvalues: Vec<f64>,
    /// `omega_k^2 - beta^2/2 - alpha`.
    pub lambdas: Vec<f64>,
    pub admissible: Vec<bool>,
}

impl SoftSpectrum {
    /// Mode `k` at `f`, `cos(sqrt(2) omega_k f)`; it vanishes at both edges.
    pub fn mode(&self, k: usize, f: f64) -> f64 {
        (SQRT_2 * self.eigenvalues[k] * f).cos()
    }
}

pub fn soft_attractive_spectrum(params: &ModelParams, k_max: usize) -> Result<SoftSpectrum> {
    if k_max == 0 {
        return Err(Error::domain("a spectrum needs at least one eigenvalue"));
    }
    let rho = params.rho();
    let eigenvalues: Vec<f64> = (0..k_max)
        .map(|k| (2 * k + 1) as f64 * PI / (2.0 * SQRT_2 * params.f_bar))
        .collect();
    let lambdas: Vec<f64> = eigenvalues.iter().map(|w| w * w - rho).collect();
    let admissible = lambdas.iter().map(|&l| l >= 0.0).collect();
    Ok(SoftSpectrum {
        params: *params,
        eigenvalues,
        lambdas,
        admissible,
    })
}

/// Large-index approximation of the mean-reverting spectrum,
/// `omega_k = k^2 pi sigma^2 / (8 f_bar^2) + lambda/2 + c0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OuSpectrum {
    pub params: ModelParams,
    pub lambda_speed: f64,
    pub mu: f64,
    pub c0: f64,
    pub eigenvalues: Vec<f64>,
    /// Always true: the values carry an `O(1/k^2)` error.
    pub asymptotic: bool,
}

impl OuSpectrum {
    /// Relaxation estimate `1 / omega_1`.
    pub fn t_relax(&self) -> f64 {
        1.0 / self.eigenvalues[0]
    }
}

pub fn ou_asymptotic_spectrum(
    lambda_speed: f64,
    mu: f64,
    params: &ModelParams,
    k_max: usize,
) -> Result<OuSpectrum> {
    if !(lambda_speed.is_finite() && lambda_speed > 0.0) {
        return Err(Error::domain("lambda_speed must be positive"));
    }
    if !mu.is_finite() {
        return Err(Error::domain("mu must be finite"));
    }
    if k_max == 0 {
        return Err(Error::domain("a spectrum needs at least one eigenvalue"));
    }
    let (s2, fb) = (params.sigma * params.sigma, params.f_bar);
    let c0 = lambda_speed * lambda_speed * (4.0 * fb * fb - 6.0 * fb * mu + 3.0 * mu * mu)
        / (6.0 * s2);
    let eigenvalues = (1..=k_max)
        .map(|k| {
            let kf = k as f64;
            kf * kf * PI * s2 / (8.0 * fb * fb) + lambda_speed / 2.0 + c0
        })
        .collect();
    Ok(OuSpectrum {
        params: *params,
        lambda_speed,
        mu,
        c0,
        eigenvalues,
        asymptotic: true,
    })
}
