//! Finite-horizon exchange-rate target zones driven by fundamentals with a
//! dynamic mean-preserving spread.
//!
//! The crate covers the whole pipeline:
//!
//! * [`spectral`]: the Robin eigenvalue problem on the band, relaxation time,
//!   the analytic regime-shift threshold, soft-attractive and mean-reverting
//!   spectra;
//! * [`stationary`]: smooth-pasted stationary exchange-rate curves (DMPS,
//!   Gaussian and Ornstein–Uhlenbeck fundamentals);
//! * [`transient`]: eigenfunction expansion of the finite-horizon solution
//!   `X(t, f) = X*(T - t, f) + X_S(f)`;
//! * [`honeymoon`]: contact-point analysis for smooth fitting;
//! * [`mc`]: reflected Monte Carlo simulation, density estimation and shape
//!   classification.
//!
//! ```
//! use targetzone::{ModelParams, spectral};
//!
//! let params = ModelParams::new(0.8, 1.0, 1.0, 0.1, 3.0)?;
//! let spectrum = spectral::build_spectrum(&params, 5)?;
//! let report = spectral::relaxation_time(&spectrum);
//! assert!(report.feasible);
//! # Ok::<(), targetzone::Error>(())
//! ```

pub mod error;
pub mod honeymoon;
pub mod mc;
pub mod params;
pub mod quad;
pub mod rng;
pub mod roots;
pub mod specfun;
pub mod spectral;
pub mod stationary;
pub mod transient;

pub use error::{Error, Result};
pub use honeymoon::{ContactReport, HoneymoonVerdict};
pub use mc::{
    DensityEstimate, DriftMode, InterventionKind, PathEnsemble, Shape, SimConfig,
};
pub use params::{rho, validate, Grid, ModelParams};
pub use rng::RngStream;
pub use spectral::{FeasibilityReport, Regime, Spectrum};
pub use stationary::{StationaryKind, StationarySolution};
pub use transient::{ProjectionMode, TransientSolution};
