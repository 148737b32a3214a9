//! Monte Carlo simulation of the regulated fundamental, density estimation
//! and density-shape classification.
//!
//! Each step is a symmetrized Euler step with a two-stage (Heun) drift,
//! `F = f + b_hat(f) dt + sigma sqrt(dt) Z`, followed by the intervention
//! rule once `|F|` passes the trigger level `kappa * f_bar`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::RngStream;
use crate::transient::TransientSolution;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftMode {
    /// `beta * s` with a fair sign `s` drawn once per path.
    Bernoulli,
    /// `beta * tanh(beta f)`.
    #[default]
    Tanh,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterventionKind {
    /// Leaning against the wind: hold the fundamental at the trigger level.
    Law,
    /// Mirror the overshoot back inside.
    #[default]
    PureReflection,
    /// No intervention at all.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub params: ModelParams,
    pub n_paths: usize,
    pub dt: f64,
    pub drift_mode: DriftMode,
    pub intervention: InterventionKind,
    /// Trigger radius as a fraction of `f_bar`; 1 means marginal intervention.
    pub trigger_fraction: f64,
    pub seed: u64,
    /// Starting value of every path.
    pub f0: f64,
    /// Keep every `record_stride`-th step.
    pub record_stride: usize,
}

impl SimConfig {
    /// Defaults: `dt = 1/alpha`, tanh drift, pure reflection, `kappa = 0.9`.
    pub fn new(params: ModelParams, n_paths: usize, seed: u64) -> Self {
        SimConfig {
            params,
            n_paths,
            dt: 1.0 / params.alpha,
            drift_mode: DriftMode::default(),
            intervention: InterventionKind::default(),
            trigger_fraction: 0.9,
            seed,
            f0: 0.0,
            record_stride: 1,
        }
    }

    /// Checks the configuration and returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        crate::params::validate(self.params)?;
        if self.n_paths == 0 {
            return Err(Error::domain("n_paths must be at least 1"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::domain("dt must be positive"));
        }
        if !(self.trigger_fraction > 0.0 && self.trigger_fraction <= 1.0) {
            return Err(Error::domain("trigger_fraction must lie in (0, 1]"));
        }
        if self.record_stride == 0 {
            return Err(Error::domain("record_stride must be at least 1"));
        }
        let limit = self.trigger_fraction * self.params.f_bar;
        if self.intervention != InterventionKind::None && self.f0.abs() > limit {
            return Err(Error::domain("f0 lies outside the intervention band"));
        }
        let mut warnings = Vec::new();
        let ratio = self.dt * self.params.alpha;
        if !(0.5..=2.0).contains(&ratio) {
            warnings.push(format!(
                "dt * alpha = {ratio} is outside [0.5, 2]; the step is not tied to the updating rate"
            ));
        }
        Ok(warnings)
    }

    /// Number of steps `round(T / dt)`, at least one.
    pub fn n_steps(&self) -> usize {
        ((self.params.horizon / self.dt).round() as usize).max(1)
    }

    /// Step actually used, `T / n_steps`.
    pub fn effective_dt(&self) -> f64 {
        self.params.horizon / self.n_steps() as f64
    }

    pub fn band_limit(&self) -> f64 {
        match self.intervention {
            InterventionKind::None => f64::INFINITY,
            _ => self.trigger_fraction * self.params.f_bar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Intervention {
    pub time: f64,
    /// Distance by which the predictor passed the trigger level.
    pub overshoot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub times: Vec<f64>,
    /// One row per path, one column per recorded time.
    pub fundamentals: Vec<Vec<f64>>,
    pub interventions: Vec<Vec<Intervention>>,
    pub bernoulli_signs: Option<Vec<i8>>,
}

impl PathEnsemble {
    pub fn n_paths(&self) -> usize {
        self.fundamentals.len()
    }

    /// Cross-section at recorded time index `i`.
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        self.fundamentals.iter().map(|p| p[i]).collect()
    }

    /// All recorded values with `t >= from`, path by path.
    pub fn pooled(&self, from: f64) -> Vec<f64> {
        let start = self.times.partition_point(|&t| t < from);
        self.fundamentals
            .iter()
            .flat_map(|p| p[start..].iter().copied())
            .collect()
    }
}

/// Folds `x` into `[-l, l]` by repeated mirroring.
fn fold(x: f64, l: f64) -> f64 {
    let period = 4.0 * l;
    let y = (x + l).rem_euclid(period);
    if y <= 2.0 * l {
        y - l
    } else {
        3.0 * l - y
    }
}

struct PathOut {
    values: Vec<f64>,
    interventions: Vec<Intervention>,
    sign: i8,
}

fn simulate_path(cfg: &SimConfig, index: u64) -> PathOut {
    let p = &cfg.params;
    let mut rng = RngStream::new(cfg.seed, index).rng();
    let sign: i8 = match cfg.drift_mode {
        DriftMode::Bernoulli => {
            if rng.random::<bool>() {
                1
            } else {
                -1
            }
        }
        DriftMode::Tanh => 0,
    };
    let beta = p.beta;
    let drift = |f: f64| match cfg.drift_mode {
        DriftMode::Bernoulli => beta * sign as f64,
        DriftMode::Tanh => beta * (beta * f).tanh(),
    };
    let n = cfg.n_steps();
    let dt = cfg.effective_dt();
    let sd = p.sigma * dt.sqrt();
    let limit = cfg.band_limit();
    let mut values = Vec::with_capacity(n / cfg.record_stride + 1);
    let mut interventions = Vec::new();
    let mut f = cfg.f0;
    values.push(f);
    for step in 1..=n {
        let b0 = drift(f);
        let b_hat = 0.5 * (b0 + drift(f + b0 * dt));
        let z: f64 = rng.sample(StandardNormal);
        let pred = f + b_hat * dt + sd * z;
        f = if pred.abs() > limit {
            interventions.push(Intervention {
                time: step as f64 * dt,
                overshoot: pred.abs() - limit,
            });
            match cfg.intervention {
                InterventionKind::Law => limit.copysign(pred),
                InterventionKind::PureReflection => fold(pred, limit),
                InterventionKind::None => pred,
            }
        } else {
            pred
        };
        if step % cfg.record_stride == 0 || step == n {
            values.push(f);
        }
    }
    PathOut {
        values,
        interventions,
        sign,
    }
}

/// Simulates `n_paths` independent paths on `[0, T]`.
///
/// Path `i` draws from stream `i` of the seed, so the ensemble does not
/// depend on the thread count.
pub fn simulate(config: &SimConfig) -> Result<PathEnsemble> {
    config.validate()?;
    let n = config.n_steps();
    let dt = config.effective_dt();
    let mut times: Vec<f64> = (0..=n)
        .filter(|&s| s == 0 || s % config.record_stride == 0 || s == n)
        .map(|s| s as f64 * dt)
        .collect();
    if let Some(last) = times.last_mut() {
        *last = config.params.horizon;
    }
    let paths: Vec<PathOut> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|i| simulate_path(config, i))
        .collect();
    let bernoulli_signs = match config.drift_mode {
        DriftMode::Bernoulli => Some(paths.iter().map(|p| p.sign).collect()),
        DriftMode::Tanh => None,
    };
    let mut fundamentals = Vec::with_capacity(paths.len());
    let mut interventions = Vec::with_capacity(paths.len());
    for p in paths {
        fundamentals.push(p.values);
        interventions.push(p.interventions);
    }
    Ok(PathEnsemble {
        times,
        fundamentals,
        interventions,
        bernoulli_signs,
    })
}

/// Exchange-rate paths `X(t, f_t)` from the finite-horizon solution.
pub fn exchange_paths(ensemble: &PathEnsemble, transient: &TransientSolution) -> Result<Vec<Vec<f64>>> {
    let horizon = transient.params().horizon;
    if let Some(&t) = ensemble.times.last() {
        if (t - horizon).abs() > 1e-9 * horizon {
            return Err(Error::domain("ensemble and solution use different horizons"));
        }
    }
    ensemble
        .fundamentals
        .par_iter()
        .map(|path| {
            path.iter()
                .zip(&ensemble.times)
                .map(|(&f, &t)| transient.value(t.min(horizon), f))
                .collect()
        })
        .collect()
}

/// Histogram density on equal-width bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub bin_edges: Vec<f64>,
    pub density: Vec<f64>,
    pub n_bins: usize,
}

impl DensityEstimate {
    pub fn width(&self) -> f64 {
        (self.bin_edges[self.n_bins] - self.bin_edges[0]) / self.n_bins as f64
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `sum density * width`.
    pub fn integral(&self) -> f64 {
        self.density
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum()
    }

    /// Linear interpolation between bin centres; constant in the outer half
    /// bins and zero outside the edges.
    pub fn eval(&self, x: f64) -> f64 {
        let lo = self.bin_edges[0];
        let hi = self.bin_edges[self.n_bins];
        if x < lo || x > hi {
            return 0.0;
        }
        let w = self.width();
        let pos = (x - lo) / w - 0.5;
        if pos <= 0.0 {
            return self.density[0];
        }
        let i = pos.floor() as usize;
        if i + 1 >= self.n_bins {
            return self.density[self.n_bins - 1];
        }
        let frac = pos - i as f64;
        self.density[i] * (1.0 - frac) + self.density[i + 1] * frac
    }

    /// Mass of the histogram inside `[a, b]`.
    pub fn mass_between(&self, a: f64, b: f64) -> f64 {
        self.density
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, w)| {
                let overlap = (w[1].min(b) - w[0].max(a)).max(0.0);
                d * overlap
            })
            .sum()
    }
}

/// Histogram over the observed range of `values`.
pub fn estimate_density(values: &[f64], n_bins: usize) -> Result<DensityEstimate> {
    if values.is_empty() {
        return Err(Error::domain("cannot estimate a density from no values"));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in values {
        if !v.is_finite() {
            return Err(Error::domain("values must be finite"));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo == hi {
        let pad = 1e-9 * lo.abs().max(1e-3);
        lo -= pad;
        hi += pad;
    }
    estimate_density_on(values, n_bins, lo, hi)
}

/// Histogram over a fixed range `[lo, hi]`; values outside are dropped and
/// the density is normalized over what remains.
pub fn estimate_density_on(
    values: &[f64],
    n_bins: usize,
    lo: f64,
    hi: f64,
) -> Result<DensityEstimate> {
    if n_bins < 10 {
        return Err(Error::domain("n_bins must be at least 10"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain("histogram range must satisfy lo < hi"));
    }
    let w = (hi - lo) / n_bins as f64;
    let mut counts = vec![0u64; n_bins];
    let mut total = 0u64;
    for &v in values {
        if v >= lo && v <= hi {
            let i = (((v - lo) / w) as usize).min(n_bins - 1);
            counts[i] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::domain("no values inside the histogram range"));
    }
    let mut bin_edges: Vec<f64> = (0..=n_bins).map(|i| lo + i as f64 * w).collect();
    bin_edges[n_bins] = hi;
    let density = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, e)| c as f64 / (total as f64 * (e[1] - e[0])))
        .collect();
    Ok(DensityEstimate {
        bin_edges,
        density,
        n_bins,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    UShaped,
    Hump,
    TwoRegime,
    DiracLike,
    Ambiguous,
}

impl Shape {
    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::UShaped => "u_shaped",
            Shape::Hump => "hump",
            Shape::TwoRegime => "two_regime",
            Shape::DiracLike => "dirac_like",
            Shape::Ambiguous => "ambiguous",
        }
    }
}

/// Classifies against the histogram's own range.
pub fn classify_shape(d: &DensityEstimate) -> Shape {
    classify_shape_in(d, d.bin_edges[0], d.bin_edges[d.n_bins])
}

/// Classifies against the reference band `[lo, hi]`.
///
/// With `r` the position relative to the band (`-1` and `1` at the edges):
/// dirac-like if more than 60% of the mass has `|r| < 0.05`; two-regime if
/// the peak over `|r| <= 0.5` and the peaks over `r <= -0.9` and `r >= 0.9`
/// all exceed 1.2 times the lowest bin between them; u-shaped if the mean
/// density over `|r| > 0.9` exceeds 1.5 times the mean over `|r| < 0.1`;
/// hump for the reverse.
pub fn classify_shape_in(d: &DensityEstimate, lo: f64, hi: f64) -> Shape {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let at = |r: f64| mid + r * half;

    let central_mass = d.mass_between(at(-0.05), at(0.05));
    if central_mass > 0.6 {
        return Shape::DiracLike;
    }
    if two_regime(d, mid, half) {
        return Shape::TwoRegime;
    }
    let outer = (d.mass_between(at(-1.0), at(-0.9)) + d.mass_between(at(0.9), at(1.0)))
        / (0.2 * half);
    let central = d.mass_between(at(-0.1), at(0.1)) / (0.2 * half);
    if outer > 1.5 * central {
        Shape::UShaped
    } else if central > 1.5 * outer {
        Shape::Hump
    } else {
        Shape::Ambiguous
    }
}

fn two_regime(d: &DensityEstimate, mid: f64, half: f64) -> bool {
    let r: Vec<f64> = d.centers().iter().map(|c| (c - mid) / half).collect();
    let argmax = |pred: &dyn Fn(f64) -> bool| {
        (0..d.n_bins)
            .filter(|&i| pred(r[i]))
            .max_by(|&a, &b| d.density[a].total_cmp(&d.density[b]))
    };
    let (Some(c), Some(left), Some(right)) = (
        argmax(&|x| x.abs() <= 0.5),
        argmax(&|x| x <= -0.9),
        argmax(&|x| x >= 0.9),
    ) else {
        return false;
    };
    let valley = |a: usize, b: usize| {
        d.density[a.min(b)..=a.max(b)]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    };
    let (vl, vr) = (valley(left, c), valley(c, right));
    let pc = d.density[c];
    pc > 1.2 * vl && pc > 1.2 * vr && d.density[left] > 1.2 * vl && d.density[right] > 1.2 * vr
}
