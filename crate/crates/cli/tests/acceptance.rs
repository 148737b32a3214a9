//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Run with `cargo test -p targetzone-cli --test acceptance -- --nocapture
//! --test-threads 1` for a readable report.

use std::f64::consts::{PI, SQRT_2};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::Value;
use targetzone::mc::{estimate_density_on, simulate, DriftMode, InterventionKind, SimConfig};
use targetzone::specfun::kummer_1f1;
use targetzone::spectral::{
    build_spectrum, eigen_residual, ou_asymptotic_spectrum, regime_scan, regime_threshold,
    relaxation_time, Regime,
};
use targetzone::stationary::{gaussian_stationary, ou_stationary, solve_smooth_pasting};
use targetzone::transient::{ProjectionMode, TransientSolution};
use targetzone::{Grid, ModelParams, RngStream};

const EIGEN_TOL: f64 = 1e-10;
const EIGEN_TIME: Duration = Duration::from_secs(1);
const RESIDUAL_TOL: f64 = 1e-10;
const RESIDUAL_DRAWS: usize = 100;
const RESIDUAL_MODES: usize = 10;
const RESIDUAL_TIME: Duration = Duration::from_secs(10);
const THRESHOLD_TOL: f64 = 1e-10;
const ODE_TOL: f64 = 1e-7;
const PASTING_TOL: f64 = 1e-6;
const GAUSSIAN_TOL: f64 = 1e-9;
const PARITY_TOL: f64 = 1e-3;
const PARITY_TIME: Duration = Duration::from_secs(30);
const UNIFORM_L1: f64 = 0.05;
const COSH_L1: f64 = 0.08;
const MC_TIME: Duration = Duration::from_secs(120);
const KS_PATHS: usize = 5000;
const KS_CRIT_1PCT: f64 = 1.628;
const SHAPES_TIME: Duration = Duration::from_secs(300);
const KUMMER_EXP_TOL: f64 = 1e-12;
const CONTIGUOUS_TOL: f64 = 1e-8;
const OU_PASTING_TOL: f64 = 1e-8;

fn report(n: u32, ok: bool, detail: String) {
    println!("criterion {n:>2}: {} | {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {detail}");
}

fn fig_params(beta: f64) -> ModelParams {
    ModelParams::new(0.8, beta, 1.0, 0.1, 3.0).unwrap()
}

/// Parameter draws shared by criteria 2 and 4.
fn draws() -> Vec<ModelParams> {
    let mut rng = RngStream::new(2024, 0).rng();
    (0..RESIDUAL_DRAWS)
        .map(|_| {
            let beta = rng.random_range(0.0..=60.0);
            let f_bar = rng.random_range(0.02..=0.2);
            let sigma = rng.random_range(0.5..=2.0);
            let alpha = rng.random_range(0.1..=250.0);
            ModelParams::new(alpha, beta, sigma, f_bar, 3.0).unwrap()
        })
        .collect()
}

fn bisect_threshold() -> f64 {
    let (mut a, mut b) = (0.5f64, 2.0f64);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m * m.tanh() < 1.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[test]
fn criterion_01_eigenvalues() {
    let start = Instant::now();
    let s = build_spectrum(&fig_params(0.0), 3).unwrap();
    let err = s
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(k, w)| (w - (2 * k + 1) as f64 * PI / (2.0 * SQRT_2 * 0.1)).abs())
        .fold(0.0, f64::max);
    let took = start.elapsed();
    report(
        1,
        err < EIGEN_TOL && took < EIGEN_TIME,
        format!("max |omega_k - (2k+1) pi sigma/(2 sqrt2 f_bar)| = {err:.2e}, {took:?}"),
    );
}

#[test]
fn criterion_02_residual_gate() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p in draws() {
        let s = build_spectrum(&p, RESIDUAL_MODES).unwrap();
        for &w in &s.eigenvalues {
            worst = worst.max(eigen_residual(w, &p).unwrap().abs());
        }
    }
    let took = start.elapsed();
    report(
        2,
        worst < RESIDUAL_TOL && took < RESIDUAL_TIME,
        format!(
            "{RESIDUAL_DRAWS} draws x {RESIDUAL_MODES} modes, worst residual {worst:.2e}, {took:?}"
        ),
    );
}

#[test]
fn criterion_03_regime_shift() {
    let x_star = bisect_threshold();
    let mut err: f64 = 0.0;
    let mut above_bound = true;
    for fb in [0.02, 0.1, 0.15] {
        let p = ModelParams::new(0.8, 0.0, 1.0, fb, 3.0).unwrap();
        let be = regime_threshold(&p);
        err = err.max((be * fb - x_star).abs());
        above_bound &= be > 1.0 / fb;
    }
    let p = ModelParams::new(0.8, 0.0, 1.0, 0.15, 3.0).unwrap();
    let grid: Vec<f64> = (0..=200).map(|i| 0.1 * i as f64).collect();
    let rows = regime_scan(&p, &grid).unwrap();
    let flips = rows.windows(2).filter(|w| w[0].regime != w[1].regime).count();
    // an upward jump is any step where the gap grows by more than 20%
    let jumps: Vec<usize> = (1..rows.len())
        .filter(|&i| rows[i].omega1 > 1.2 * rows[i - 1].omega1)
        .collect();
    let single_jump = jumps.len() == 1
        && rows[jumps[0]].regime == Regime::Shifted
        && rows[jumps[0] - 1].regime == Regime::Diffusive;
    report(
        3,
        err < THRESHOLD_TOL && above_bound && flips == 1 && single_jump,
        format!(
            "|beta_e f_bar - x*| = {err:.1e}, beta_e > 1/f_bar: {above_bound}, flips {flips}, upward jumps at beta {:?}",
            jumps.iter().map(|&i| grid[i]).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_04_relaxation_sandwich() {
    let mut diffusive = 0;
    let mut violations = 0;
    let mut example = String::new();
    for p in draws() {
        let r = relaxation_time(&build_spectrum(&p, 1).unwrap());
        if r.regime == Regime::Diffusive {
            diffusive += 1;
            if !(r.lower_bound <= r.t_relax && r.t_relax <= r.upper_bound) {
                violations += 1;
                if example.is_empty() {
                    example = format!(
                        "e.g. t_relax {:.3e} vs [{:.3e}, {:.3e}]",
                        r.t_relax, r.lower_bound, r.upper_bound
                    );
                }
            }
        }
    }
    report(
        4,
        violations == 0,
        format!("{violations} of {diffusive} diffusive draws outside the bounds {example}"),
    );
}

#[test]
fn criterion_05_stationary() {
    let mut worst_ode: f64 = 0.0;
    let mut worst_paste: f64 = 0.0;
    for beta in [0.0, 1.0, 5.0] {
        let p = fig_params(beta);
        let s = solve_smooth_pasting(&p).unwrap();
        for &f in Grid::band(&p, 200).unwrap().points() {
            let j = s.jet(f).unwrap();
            let r = 0.5 * j.d2 + beta * (beta * f).tanh() * j.d1 - 0.8 * j.value + 0.8 * f;
            worst_ode = worst_ode.max(r.abs());
        }
        for edge in [-0.1, 0.1] {
            worst_paste = worst_paste.max(s.derivative(edge).unwrap().abs());
        }
    }
    let p = fig_params(0.0);
    let s = solve_smooth_pasting(&p).unwrap();
    let g = gaussian_stationary(&p).unwrap();
    let rho0 = 1.6f64.sqrt();
    let gauss_err = Grid::band(&p, 200)
        .unwrap()
        .points()
        .iter()
        .map(|&f| {
            let closed = f - (rho0 * f).sinh() / (rho0 * (rho0 * 0.1).cosh());
            (s.value(f).unwrap() - closed)
                .abs()
                .max((g.value(f).unwrap() - closed).abs())
        })
        .fold(0.0, f64::max);
    report(
        5,
        worst_ode < ODE_TOL && worst_paste < PASTING_TOL && gauss_err < GAUSSIAN_TOL,
        format!(
            "ODE residual {worst_ode:.1e}, edge slope {worst_paste:.1e}, Gaussian closed form {gauss_err:.1e}"
        ),
    );
}

#[test]
fn criterion_06_terminal_parity() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for beta in [0.0, 1.0, 5.0] {
        let p = fig_params(beta);
        let grid = Grid::band(&p, 401).unwrap();
        let errs: Vec<f64> = [25, 50, 100, 200]
            .iter()
            .map(|&k| {
                let ts = TransientSolution::new(&p, k, ProjectionMode::ExactProjection).unwrap();
                grid.points()
                    .iter()
                    .map(|&f| ts.value(3.0, f).unwrap().abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        ok &= errs[3] < PARITY_TOL && errs.windows(2).all(|w| w[1] < w[0]);
        detail.push(format!("beta {beta}: {:.1e}", errs[3]));
    }
    let took = start.elapsed();
    report(
        6,
        ok && took < PARITY_TIME,
        format!("sup |X(T, f)| at K=200 {}, {took:?}", detail.join(", ")),
    );
}

fn pooled_density_l1(cfg: &SimConfig, burn_in: f64, oracle_cdf: impl Fn(f64) -> f64) -> f64 {
    let e = simulate(cfg).unwrap();
    let v = e.pooled(burn_in);
    let fb = cfg.params.f_bar;
    let d = estimate_density_on(&v, 61, -fb, fb).unwrap();
    d.bin_edges
        .windows(2)
        .zip(&d.density)
        .map(|(w, &x)| (x * (w[1] - w[0]) - (oracle_cdf(w[1]) - oracle_cdf(w[0]))).abs())
        .sum()
}

#[test]
fn criterion_07_stationary_densities() {
    // (a) reflected Brownian motion: uniform on the band
    let start = Instant::now();
    let p = ModelParams::new(0.8, 0.0, 1.0, 0.1, 3.0).unwrap();
    let mut cfg = SimConfig::new(p, 5000, 7);
    cfg.dt = 1.0 / 200.0;
    cfg.intervention = InterventionKind::PureReflection;
    cfg.trigger_fraction = 1.0;
    let l1_uniform = pooled_density_l1(&cfg, 1.0, |f| (f + 0.1) / 0.2);
    let took_a = start.elapsed();

    // (b) tanh drift: zero-flux density cosh^2(beta f) / Z at sigma = 1
    let start = Instant::now();
    let (beta, fb) = (3.0, 0.5);
    let p = ModelParams::new(0.8, beta, 1.0, fb, 3.0).unwrap();
    let mut cfg = SimConfig::new(p, 5000, 8);
    cfg.dt = 1.0 / 200.0;
    cfg.intervention = InterventionKind::PureReflection;
    cfg.trigger_fraction = 1.0;
    let prim = |f: f64| f / 2.0 + (2.0 * beta * f).sinh() / (4.0 * beta);
    let z = prim(fb) - prim(-fb);
    let l1_cosh = pooled_density_l1(&cfg, 1.0, |f| (prim(f) - prim(-fb)) / z);
    let took_b = start.elapsed();
    report(
        7,
        l1_uniform < UNIFORM_L1 && l1_cosh < COSH_L1 && took_a < MC_TIME && took_b < MC_TIME,
        format!(
            "(a) L1 to uniform {l1_uniform:.4} in {took_a:?}; (b) L1 to cosh^2 {l1_cosh:.4} in {took_b:?}"
        ),
    );
}

fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Complementary error function, Numerical Recipes `erfcc` (|rel err| < 1.2e-7).
fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let r = t * (-z * z - 1.265_512_23
        + t * (1.000_023_68
            + t * (0.374_091_96
                + t * (0.096_784_18
                    + t * (-0.186_288_06
                        + t * (0.278_868_07
                            + t * (-1.135_203_98
                                + t * (1.488_515_87 + t * (-0.822_152_23 + t * 0.170_872_77)))))))))
        .exp();
    if x >= 0.0 {
        r
    } else {
        2.0 - r
    }
}

#[test]
fn criterion_08_free_space_mixture() {
    let (beta, sigma, t) = (1.0, 1.0, 0.5);
    let p = ModelParams::new(0.8, beta, sigma, 0.1, t).unwrap();
    let mut cfg = SimConfig::new(p, KS_PATHS, 99);
    cfg.dt = 0.005;
    cfg.drift_mode = DriftMode::Bernoulli;
    cfg.intervention = InterventionKind::None;
    let e = simulate(&cfg).unwrap();
    let mut x = e.marginal(e.times.len() - 1);
    x.sort_by(f64::total_cmp);
    let sd = sigma * t.sqrt();
    let cdf = |v: f64| 0.5 * normal_cdf((v - beta * t) / sd) + 0.5 * normal_cdf((v + beta * t) / sd);
    let n = x.len() as f64;
    let ks = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let c = cdf(v);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max);
    let crit = KS_CRIT_1PCT / n.sqrt();
    report(
        8,
        ks < crit,
        format!("KS statistic {ks:.4} against 1% critical value {crit:.4}"),
    );
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn cli_json(args: &[&str]) -> Value {
    let out = Command::new(env!("CARGO_BIN_EXE_targetzone"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn criterion_09_figure_shapes() {
    let start = Instant::now();
    let cases = [
        ("fig6a.json", "u_shaped"),
        ("fig6b.json", "hump"),
        ("fig7b.json", "two_regime"),
        ("fig8.json", "dirac_like"),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (file, want) in cases {
        let path = scenario(file);
        let v = cli_json(&["density", "--config", path.to_str().unwrap()]);
        let primary = v["primary"].as_str().unwrap().to_string();
        let got = v[&primary]["shape"].as_str().unwrap().to_string();
        ok &= got == want;
        detail.push(format!("{file} {got} (want {want})"));
    }
    let took = start.elapsed();
    report(
        9,
        ok && took < SHAPES_TIME,
        format!("{}, {took:?}", detail.join("; ")),
    );
}

#[test]
fn criterion_10_special_functions() {
    let exp_err = (-1000..=1000)
        .map(|i| {
            let x = i as f64 / 100.0;
            ((kummer_1f1(1.0, 1.0, x).unwrap() - x.exp()) / x.exp()).abs()
        })
        .fold(0.0, f64::max);
    let mut rng = RngStream::new(10, 0).rng();
    let mut zero_exact = true;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let a = rng.random_range(-5.0..5.0);
        let b = rng.random_range(0.5..5.0);
        let x = rng.random_range(-10.0..10.0);
        zero_exact &= kummer_1f1(a, b, 0.0).unwrap() == 1.0;
        let t1 = b * kummer_1f1(a, b, x).unwrap();
        let t2 = b * kummer_1f1(a - 1.0, b, x).unwrap();
        let t3 = x * kummer_1f1(a, b + 1.0, x).unwrap();
        let scale = t1.abs().max(t2.abs()).max(t3.abs());
        worst = worst.max((t1 - t2 - t3).abs() / scale);
    }
    report(
        10,
        exp_err < KUMMER_EXP_TOL && zero_exact && worst < CONTIGUOUS_TOL,
        format!(
            "1F1(1,1,x) vs e^x {exp_err:.1e}, 1F1(a,b,0) = 1: {zero_exact}, contiguous relation {worst:.1e}"
        ),
    );
}

#[test]
fn criterion_11_ou() {
    let p = fig_params(0.0);
    let zero_mu = ou_stationary(1.0, 0.0, &p).unwrap();
    let s = ou_stationary(1.0, 0.02, &p).unwrap();
    let paste = s
        .derivative(-0.1)
        .unwrap()
        .abs()
        .max(s.derivative(0.1).unwrap().abs());
    let (lam, mu) = (1.0, 0.02);
    let spec = ou_asymptotic_spectrum(lam, mu, &p, 5).unwrap();
    let c0 = lam * lam * (4.0 * 0.1 * 0.1 - 6.0 * 0.1 * mu + 3.0 * mu * mu) / (6.0 * 1.0);
    let exact = spec.c0 == c0
        && spec.eigenvalues.iter().enumerate().all(|(i, &w)| {
            let k = (i + 1) as f64;
            w == k * k * PI * 1.0 / (8.0 * 0.1 * 0.1) + lam / 2.0 + c0
        });
    report(
        11,
        zero_mu.a == 0.0 && paste < OU_PASTING_TOL && exact,
        format!(
            "A at mu=0 is {}, edge slope {paste:.1e}, asymptotic spectrum exact: {exact}",
            zero_mu.a
        ),
    );
}

fn run_bytes(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_targetzone"))
        .args(args)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small_sim.json");
    let mut v: Value =
        serde_json::from_str(&std::fs::read_to_string(scenario("fig7b.json")).unwrap()).unwrap();
    v["sim"]["n_paths"] = 300.into();
    std::fs::write(&small, v.to_string()).unwrap();
    let small = small.to_str().unwrap().to_string();
    let jobs: Vec<(&str, String)> = vec![
        ("spectrum", scenario("fig4_spectrum_a.json").to_str().unwrap().into()),
        ("stationary", scenario("fig2_stationary.json").to_str().unwrap().into()),
        ("transient", scenario("fig3_transient.json").to_str().unwrap().into()),
        ("feasibility", scenario("fig3_transient.json").to_str().unwrap().into()),
        ("regime-scan", scenario("regimeshift_b.json").to_str().unwrap().into()),
        ("honeymoon", scenario("jump.json").to_str().unwrap().into()),
        ("ou", scenario("ou_stationary.json").to_str().unwrap().into()),
        ("simulate", small.clone()),
        ("density", small.clone()),
    ];
    let mut mismatched = Vec::new();
    for (cmd, cfg) in &jobs {
        for format in ["csv", "json"] {
            let base = [*cmd, "--config", cfg.as_str(), "--format", format, "--seed", "5"];
            let one = run_bytes(&[&base[..], &["--threads", "1"]].concat());
            let eight = run_bytes(&[&base[..], &["--threads", "8"]].concat());
            let again = run_bytes(&[&base[..], &["--threads", "8"]].concat());
            if one != eight || eight != again || one.is_empty() {
                mismatched.push(format!("{cmd}/{format}"));
            }
        }
    }
    report(
        12,
        mismatched.is_empty(),
        format!(
            "{} command/format pairs at 1 and 8 threads, mismatches: {mismatched:?}",
            jobs.len() * 2
        ),
    );
}
