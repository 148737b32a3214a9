//! JSON scenario schema. Every section is optional; unknown keys are errors.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use targetzone::{DriftMode, InterventionKind, ModelParams, ProjectionMode};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: ModelParams,
    #[serde(default)]
    pub spectral: SpectralSection,
    #[serde(default)]
    pub stationary: StationarySection,
    #[serde(default)]
    pub transient: TransientSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub honeymoon: HoneymoonSection,
    #[serde(default)]
    pub ou: OuSection,
    #[serde(default)]
    pub outputs: OutputSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSection {
    /// Number of eigenvalues.
    #[serde(default = "default_k", alias = "K")]
    pub k: usize,
    /// Explicit risk grid for `regime-scan`.
    #[serde(default)]
    pub beta_grid: Option<Vec<f64>>,
    /// Uniform risk grid `[from, to]` with `points` entries, used when no
    /// explicit grid is given.
    #[serde(default)]
    pub scan: Option<ScanRange>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRange {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Default for SpectralSection {
    fn default() -> Self {
        SpectralSection {
            k: default_k(),
            beta_grid: None,
            scan: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationarySection {
    /// Risk intensities to draw curves for; defaults to the model's.
    #[serde(default)]
    pub betas: Option<Vec<f64>>,
    #[serde(default = "default_f_points")]
    pub f_points: usize,
}

impl Default for StationarySection {
    fn default() -> Self {
        StationarySection {
            betas: None,
            f_points: default_f_points(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransientSection {
    #[serde(default)]
    pub mode: ProjectionMode,
    /// Explicit calendar times; defaults to `t_points` uniform times on `[0, T]`.
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    #[serde(default = "default_t_points")]
    pub t_points: usize,
    #[serde(default = "default_f_points_surface", alias = "f_grid")]
    pub f_points: usize,
}

impl Default for TransientSection {
    fn default() -> Self {
        TransientSection {
            mode: ProjectionMode::default(),
            t_grid: None,
            t_points: default_t_points(),
            f_points: default_f_points_surface(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Fundamental,
    #[default]
    ExchangeRate,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_paths")]
    pub n_paths: usize,
    /// Defaults to `1 / alpha`.
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub drift_mode: DriftMode,
    #[serde(default)]
    pub intervention: InterventionKind,
    #[serde(default = "default_kappa")]
    pub trigger_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    #[serde(default = "default_bins")]
    pub n_bins: usize,
    /// Density samples are pooled over recorded times `t >= pool_from`.
    #[serde(default)]
    pub pool_from: f64,
    /// Variable whose shape `density` reports first.
    #[serde(default)]
    pub variable: Variable,
    /// How many paths `simulate` writes out.
    #[serde(default = "default_paths_out")]
    pub paths_out: usize,
}

impl Default for SimSection {
    fn default() -> Self {
        SimSection {
            n_paths: default_paths(),
            dt: None,
            drift_mode: DriftMode::default(),
            intervention: InterventionKind::default(),
            trigger_fraction: default_kappa(),
            seed: 0,
            record_stride: default_stride(),
            n_bins: default_bins(),
            pool_from: 0.0,
            variable: Variable::default(),
            paths_out: default_paths_out(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoneymoonSection {
    /// Level `F` the curve must touch; defaults to `f_bar`.
    #[serde(default)]
    pub level: Option<f64>,
    #[serde(default)]
    pub omega: f64,
}

impl Default for HoneymoonSection {
    fn default() -> Self {
        HoneymoonSection {
            level: None,
            omega: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuSection {
    #[serde(default = "default_lambda")]
    pub lambda_speed: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default = "default_ou_k")]
    pub k: usize,
    #[serde(default = "default_f_points")]
    pub f_points: usize,
}

impl Default for OuSection {
    fn default() -> Self {
        OuSection {
            lambda_speed: default_lambda(),
            mu: 0.0,
            k: default_ou_k(),
            f_points: default_f_points(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

fn default_k() -> usize {
    50
}
fn default_f_points() -> usize {
    201
}
fn default_f_points_surface() -> usize {
    41
}
fn default_t_points() -> usize {
    31
}
fn default_paths() -> usize {
    5000
}
fn default_kappa() -> f64 {
    0.9
}
fn default_stride() -> usize {
    1
}
fn default_bins() -> usize {
    61
}
fn default_paths_out() -> usize {
    10
}
fn default_lambda() -> f64 {
    1.0
}
fn default_ou_k() -> usize {
    10
}

/// Raised for malformed or invalid scenarios; maps to the validation exit code.
#[derive(Debug)]
pub struct Invalid(pub String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

impl Scenario {
    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading scenario {}", path.display()))?;
        Scenario::parse(&text).with_context(|| format!("scenario {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Scenario> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Invalid(e.to_string()))?;
        targetzone::validate(s.model)?;
        Ok(s)
    }

    pub fn sim_config(&self) -> targetzone::SimConfig {
        let mut c = targetzone::SimConfig::new(self.model, self.sim.n_paths, self.sim.seed);
        if let Some(dt) = self.sim.dt {
            c.dt = dt;
        }
        c.drift_mode = self.sim.drift_mode;
        c.intervention = self.sim.intervention;
        c.trigger_fraction = self.sim.trigger_fraction;
        c.record_stride = self.sim.record_stride;
        c
    }
}
