//! Benchmark fixtures shared by the criterion targets.

use targetzone::ModelParams;

/// Three-year horizon, ten-percent band, unit volatility.
pub fn reference_params(beta: f64) -> ModelParams {
    ModelParams::new(0.8, beta, 1.0, 0.1, 3.0).expect("reference parameters are valid")
}
