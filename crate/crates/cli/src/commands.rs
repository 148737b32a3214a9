//! One function per subcommand; each returns the rendered document.

use anyhow::{bail, Result};
use serde_json::{json, Value};
use targetzone::honeymoon::classify_honeymoon;
use targetzone::mc::{classify_shape_in, estimate_density, exchange_paths, simulate};
use targetzone::spectral::{
    build_spectrum, ou_asymptotic_spectrum, regime_scan, regime_threshold, relaxation_time,
};
use targetzone::stationary::{ou_stationary, solve_smooth_pasting};
use targetzone::transient::{surface, TransientSolution};
use targetzone::{DensityEstimate, Grid, PathEnsemble, Shape};

use crate::output::{num, Table};
use crate::scenario::{Format, Invalid, Scenario, Variable};

fn render(format: Format, json: impl FnOnce() -> Value, csv: impl FnOnce() -> String) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json()).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => csv(),
    }
}

pub fn spectrum(sc: &Scenario, format: Format) -> Result<String> {
    let s = build_spectrum(&sc.model, sc.spectral.k)?;
    let regime = s.regime.as_str();
    Ok(render(
        format,
        || {
            json!({
                "params": sc.model,
                "regime": s.regime,
                "robin_constant": sc.model.robin_constant(),
                "eigenvalues": s.eigenvalues,
                "roots": s.roots,
                "brackets": s.brackets,
            })
        },
        || {
            let mut t = Table::new(&["k", "omega", "u", "bracket_lo", "bracket_hi", "regime"]);
            for i in 0..s.len() {
                t.row(&[
                    (i + 1).to_string(),
                    num(s.eigenvalues[i]),
                    num(s.roots[i]),
                    num(s.brackets[i].0),
                    num(s.brackets[i].1),
                    regime.to_string(),
                ]);
            }
            t.finish()
        },
    ))
}

pub fn stationary(sc: &Scenario, format: Format) -> Result<String> {
    let betas = sc
        .stationary
        .betas
        .clone()
        .unwrap_or_else(|| vec![sc.model.beta]);
    let grid = Grid::band(&sc.model, sc.stationary.f_points)?;
    let mut curves = Vec::new();
    for &beta in &betas {
        let sol = solve_smooth_pasting(&sc.model.with_beta(beta)?)?;
        let xs = sol.curve(grid.points())?;
        curves.push((beta, sol, xs));
    }
    Ok(render(
        format,
        || {
            json!({
                "f": grid.points(),
                "curves": curves.iter().map(|(beta, sol, xs)| json!({
                    "beta": beta, "a": sol.a, "b": sol.b, "x_s": xs,
                })).collect::<Vec<_>>(),
            })
        },
        || {
            let mut t = Table::new(&["beta", "f", "x_s"]);
            for (beta, _, xs) in &curves {
                for (f, x) in grid.points().iter().zip(xs) {
                    t.row(&[num(*beta), num(*f), num(*x)]);
                }
            }
            t.finish()
        },
    ))
}

fn t_grid(sc: &Scenario) -> Result<Vec<f64>> {
    if let Some(g) = &sc.transient.t_grid {
        return Ok(g.clone());
    }
    let n = sc.transient.t_points;
    if n < 2 {
        bail!(Invalid("t_points must be at least 2".into()));
    }
    let horizon = sc.model.horizon;
    let mut g: Vec<f64> = (0..n).map(|i| horizon * i as f64 / (n - 1) as f64).collect();
    g[n - 1] = horizon;
    Ok(g)
}

fn transient_solution(sc: &Scenario) -> Result<TransientSolution> {
    Ok(TransientSolution::new(
        &sc.model,
        sc.spectral.k,
        sc.transient.mode,
    )?)
}

pub fn transient(sc: &Scenario, format: Format) -> Result<String> {
    let ts = transient_solution(sc)?;
    let times = t_grid(sc)?;
    let grid = Grid::band(&sc.model, sc.transient.f_points)?;
    let m = surface(&ts, &times, &grid)?;
    Ok(render(
        format,
        || {
            json!({
                "mode": ts.mode,
                "truncation_k": ts.truncation_k,
                "coeffs": ts.coeffs,
                "t": times,
                "f": grid.points(),
                "x": m,
            })
        },
        || {
            let mut t = Table::new(&["t", "f", "x"]);
            for (ti, row) in times.iter().zip(&m) {
                for (f, x) in grid.points().iter().zip(row) {
                    t.row(&[num(*ti), num(*f), num(*x)]);
                }
            }
            t.finish()
        },
    ))
}

pub fn feasibility(sc: &Scenario, format: Format) -> Result<String> {
    let s = build_spectrum(&sc.model, 1)?;
    let r = relaxation_time(&s);
    let threshold = regime_threshold(&sc.model);
    Ok(render(
        format,
        || {
            json!({
                "horizon": sc.model.horizon,
                "omega1": r.omega1,
                "t_relax": r.t_relax,
                "lower_bound": r.lower_bound,
                "upper_bound": r.upper_bound,
                "within_bounds": r.within_bounds,
                "feasible": r.feasible,
                "regime": r.regime,
                "beta_threshold": threshold,
            })
        },
        || {
            let mut t = Table::new(&[
                "horizon",
                "omega1",
                "t_relax",
                "lower_bound",
                "upper_bound",
                "within_bounds",
                "feasible",
                "regime",
                "beta_threshold",
            ]);
            t.row(&[
                num(sc.model.horizon),
                num(r.omega1),
                num(r.t_relax),
                num(r.lower_bound),
                num(r.upper_bound),
                r.within_bounds.to_string(),
                r.feasible.to_string(),
                r.regime.as_str().to_string(),
                num(threshold),
            ]);
            t.finish()
        },
    ))
}

fn beta_grid(sc: &Scenario) -> Result<Vec<f64>> {
    if let Some(g) = &sc.spectral.beta_grid {
        return Ok(g.clone());
    }
    let Some(r) = sc.spectral.scan else {
        bail!(Invalid(
            "regime-scan needs spectral.beta_grid or spectral.scan".into()
        ));
    };
    if r.points < 2 || !(r.to > r.from) {
        bail!(Invalid("spectral.scan needs points >= 2 and to > from".into()));
    }
    Ok((0..r.points)
        .map(|i| r.from + (r.to - r.from) * i as f64 / (r.points - 1) as f64)
        .collect())
}

pub fn regime_scan_cmd(sc: &Scenario, format: Format) -> Result<String> {
    let grid = beta_grid(sc)?;
    let rows = regime_scan(&sc.model, &grid)?;
    let threshold = regime_threshold(&sc.model);
    Ok(render(
        format,
        || json!({ "beta_threshold": threshold, "rows": rows }),
        || {
            let mut t = Table::new(&["beta", "omega1", "t_relax", "regime"]);
            for r in &rows {
                t.row(&[
                    num(r.beta),
                    num(r.omega1),
                    num(r.t_relax),
                    r.regime.as_str().to_string(),
                ]);
            }
            t.finish()
        },
    ))
}

struct Simulated {
    ensemble: PathEnsemble,
    exchange: Vec<Vec<f64>>,
    transient: TransientSolution,
}

fn run_simulation(sc: &Scenario) -> Result<Simulated> {
    let cfg = sc.sim_config();
    for w in cfg.validate()? {
        eprintln!("warning: {w}");
    }
    let ensemble = simulate(&cfg)?;
    let transient = transient_solution(sc)?;
    let exchange = exchange_paths(&ensemble, &transient)?;
    Ok(Simulated {
        ensemble,
        exchange,
        transient,
    })
}

pub fn simulate_cmd(sc: &Scenario, format: Format) -> Result<String> {
    let sim = run_simulation(sc)?;
    let e = &sim.ensemble;
    let keep = sc.sim.paths_out.min(e.n_paths());
    Ok(render(
        format,
        || {
            json!({
                "n_paths": e.n_paths(),
                "t": e.times,
                "interventions": e.interventions.iter().map(Vec::len).collect::<Vec<_>>(),
                "bernoulli_signs": e.bernoulli_signs,
                "paths": (0..keep).map(|i| json!({
                    "f": e.fundamentals[i], "x": sim.exchange[i],
                })).collect::<Vec<_>>(),
            })
        },
        || {
            let mut t = Table::new(&["path", "step", "t", "f", "x"]);
            for i in 0..keep {
                for (j, tj) in e.times.iter().enumerate() {
                    t.row(&[
                        i.to_string(),
                        j.to_string(),
                        num(*tj),
                        num(e.fundamentals[i][j]),
                        num(sim.exchange[i][j]),
                    ]);
                }
            }
            t.finish()
        },
    ))
}

/// Pooled values of both variables over recorded times `t >= from`.
fn pooled(sim: &Simulated, from: f64) -> (Vec<f64>, Vec<f64>) {
    let start = sim.ensemble.times.partition_point(|&t| t < from);
    let f = sim
        .ensemble
        .fundamentals
        .iter()
        .flat_map(|p| p[start..].iter().copied())
        .collect();
    let x = sim
        .exchange
        .iter()
        .flat_map(|p| p[start..].iter().copied())
        .collect();
    (f, x)
}

/// Densities of the fundamental and the exchange rate with their shapes.
pub struct Densities {
    pub fundamental: (DensityEstimate, Shape),
    pub exchange_rate: (DensityEstimate, Shape),
}

pub fn densities(sc: &Scenario) -> Result<Densities> {
    let sim = run_simulation(sc)?;
    let (f, x) = pooled(&sim, sc.sim.pool_from);
    let fb = sc.model.f_bar;
    let df = estimate_density(&f, sc.sim.n_bins)?;
    let dx = estimate_density(&x, sc.sim.n_bins)?;
    let st = &sim.transient.stationary;
    let (xlo, xhi) = (st.value(-fb)?, st.value(fb)?);
    Ok(Densities {
        fundamental: (df.clone(), classify_shape_in(&df, -fb, fb)),
        exchange_rate: (dx.clone(), classify_shape_in(&dx, xlo, xhi)),
    })
}

pub fn density(sc: &Scenario, format: Format) -> Result<String> {
    let d = densities(sc)?;
    let mut order = [
        ("fundamental", &d.fundamental),
        ("exchange_rate", &d.exchange_rate),
    ];
    if sc.sim.variable == Variable::ExchangeRate {
        order.swap(0, 1);
    }
    Ok(render(
        format,
        || {
            let mut m = serde_json::Map::new();
            m.insert("primary".into(), json!(order[0].0));
            for (name, (est, shape)) in order {
                m.insert(
                    name.into(),
                    json!({ "shape": shape, "bin_edges": est.bin_edges, "density": est.density }),
                );
            }
            Value::Object(m)
        },
        || {
            let mut t = Table::new(&["variable", "shape", "bin_lo", "bin_hi", "density"]);
            for (name, (est, shape)) in order {
                for (w, d) in est.bin_edges.windows(2).zip(&est.density) {
                    t.row(&[
                        name.to_string(),
                        shape.as_str().to_string(),
                        num(w[0]),
                        num(w[1]),
                        num(*d),
                    ]);
                }
            }
            t.finish()
        },
    ))
}

pub fn honeymoon(sc: &Scenario, format: Format) -> Result<String> {
    let level = sc.honeymoon.level.unwrap_or(sc.model.f_bar);
    let rep = classify_honeymoon(&sc.model, level, sc.honeymoon.omega)?;
    Ok(render(
        format,
        || {
            json!({
                "level": level,
                "omega": sc.honeymoon.omega,
                "w": rep.w,
                "w_critical": rep.w_critical,
                "ordering_holds": rep.ordering_holds,
                "regime": rep.regime,
                "verdict": rep.verdict,
                "applicable": rep.applicable(),
                "beta_threshold": regime_threshold(&sc.model),
            })
        },
        || {
            let mut t = Table::new(&["w", "delta"]);
            for &(w, d) in &rep.delta_profile {
                t.row(&[num(w), num(d)]);
            }
            t.finish()
        },
    ))
}

pub fn ou(sc: &Scenario, format: Format) -> Result<String> {
    let o = &sc.ou;
    let sol = ou_stationary(o.lambda_speed, o.mu, &sc.model)?;
    let spec = ou_asymptotic_spectrum(o.lambda_speed, o.mu, &sc.model, o.k)?;
    let grid = Grid::band(&sc.model, o.f_points)?;
    let xs = sol.curve(grid.points())?;
    Ok(render(
        format,
        || {
            json!({
                "lambda_speed": o.lambda_speed,
                "mu": o.mu,
                "a": sol.a,
                "b": sol.b,
                "f": grid.points(),
                "x_s": xs,
                "asymptotic_spectrum": {
                    "c0": spec.c0,
                    "eigenvalues": spec.eigenvalues,
                    "t_relax": spec.t_relax(),
                },
            })
        },
        || {
            let mut t = Table::new(&["f", "x_s"]);
            for (f, x) in grid.points().iter().zip(&xs) {
                t.row(&[num(*f), num(*x)]);
            }
            t.finish()
        },
    ))
}
