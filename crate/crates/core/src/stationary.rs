//! Stationary exchange-rate curves with smooth pasting at the band edges.
//!
//! The risk-adjusted curve is
//!
//! ```text
//! X_S(f) = [a e^{m (f - hi)} + b e^{-m (f - lo)}] / cosh(beta f) + p f + q tanh(beta f)
//! ```
//!
//! with `m = sqrt(beta^2 + 2 alpha) / sigma`,
//! `p = 2 alpha / D`, `q = 4 alpha beta sigma^2 / D^2` and
//! `D = 2 alpha + beta^2 (1 - sigma^2)`. It solves
//! `sigma^2/2 X'' + sigma^2 beta tanh(beta f) X' + ((sigma^2 - 1) beta^2/2 - alpha) X + alpha f = 0`,
//! which for `sigma = 1` is `X''/2 + beta tanh(beta f) X' - alpha X + alpha f = 0`.
//! The exponentials are anchored at the band edges so nothing overflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::specfun::{exp_over_cosh, kummer_1f1};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StationaryKind {
    Dmps,
    Gaussian,
    Ou,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct Basis {
    /// Edge-anchored homogeneous coefficients.
    a_edge: f64,
    b_edge: f64,
    m: f64,
    p: f64,
    q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct OuTerms {
    lambda_speed: f64,
    mu: f64,
    kummer_a: f64,
    slope: f64,
    intercept: f64,
}

/// Smooth-pasted stationary solution, ready for evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarySolution {
    pub params: ModelParams,
    pub kind: StationaryKind,
    /// Coefficient of the growing homogeneous solution (`e^{m f} / cosh` or
    /// the even Kummer function).
    pub a: f64,
    /// Coefficient of the decaying (or odd Kummer) homogeneous solution.
    pub b: f64,
    pub lo: f64,
    pub hi: f64,
    basis: Option<Basis>,
    ou: Option<OuTerms>,
}

/// Value, first and second derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl StationarySolution {
    pub fn lambda_speed(&self) -> Option<f64> {
        self.ou.map(|o| o.lambda_speed)
    }

    pub fn mu(&self) -> Option<f64> {
        self.ou.map(|o| o.mu)
    }

    /// `(a_edge, b_edge, m, p, q)` for the risk-adjusted and Gaussian kinds.
    pub fn basis_coefficients(&self) -> Option<(f64, f64, f64, f64, f64)> {
        self.basis.map(|b| (b.a_edge, b.b_edge, b.m, b.p, b.q))
    }

    pub fn value(&self, f: f64) -> Result<f64> {
        Ok(self.jet(f)?.value)
    }

    pub fn derivative(&self, f: f64) -> Result<f64> {
        Ok(self.jet(f)?.d1)
    }

    /// Value and analytic derivatives at `f`.
    pub fn jet(&self, f: f64) -> Result<Jet> {
        let tol = 1e-12 * (self.hi - self.lo).max(1.0);
        if !(f >= self.lo - tol && f <= self.hi + tol) {
            return Err(Error::domain(format!(
                "f = {f} lies outside the band [{}, {}]",
                self.lo, self.hi
            )));
        }
        match (self.basis, self.ou) {
            (Some(b), _) => Ok(dmps_jet(&b, self.params.beta, self.lo, self.hi, f)),
            (None, Some(o)) => ou_jet(&o, &self.params, self.a, self.b, f),
            (None, None) => unreachable!("solution without basis"),
        }
    }

    /// `X_S` on every point of a grid.
    pub fn curve(&self, points: &[f64]) -> Result<Vec<f64>> {
        points.iter().map(|&f| self.value(f)).collect()
    }
}

/// `X_S(f)`.
pub fn eval_stationary(sol: &StationarySolution, f: f64) -> Result<f64> {
    sol.value(f)
}

struct Homogeneous {
    g1: [f64; 3],
    g2: [f64; 3],
}

fn homogeneous(m: f64, beta: f64, lo: f64, hi: f64, f: f64) -> Homogeneous {
    let t = (beta * f).tanh();
    let s2 = 1.0 - t * t;
    let e1 = exp_over_cosh(m * (f - hi), beta, f);
    let e2 = exp_over_cosh(-m * (f - lo), beta, f);
    let k1 = m - beta * t;
    let k2 = -m - beta * t;
    Homogeneous {
        g1: [e1, e1 * k1, e1 * (k1 * k1 - beta * beta * s2)],
        g2: [e2, e2 * k2, e2 * (k2 * k2 - beta * beta * s2)],
    }
}

fn particular(b: &Basis, beta: f64, f: f64) -> [f64; 3] {
    let t = (beta * f).tanh();
    let s2 = 1.0 - t * t;
    [
        b.p * f + b.q * t,
        b.p + b.q * beta * s2,
        -2.0 * b.q * beta * beta * t * s2,
    ]
}

fn dmps_jet(b: &Basis, beta: f64, lo: f64, hi: f64, f: f64) -> Jet {
    let h = homogeneous(b.m, beta, lo, hi, f);
    let p = particular(b, beta, f);
    let comb = |i: usize| b.a_edge * h.g1[i] + b.b_edge * h.g2[i] + p[i];
    Jet {
        value: comb(0),
        d1: comb(1),
        d2: comb(2),
    }
}

/// Solves `[[a11, a12], [a21, a22]] x = r` by elimination with partial
/// pivoting.
fn solve2(m: [[f64; 2]; 2], r: [f64; 2]) -> Result<[f64; 2]> {
    let scale = (m[0][0].hypot(m[0][1])) * (m[1][0].hypot(m[1][1]));
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(scale > 0.0) || !(det.abs() > 1e-14 * scale) {
        return Err(Error::Singular(format!(
            "smooth-pasting determinant {det:e} is degenerate"
        )));
    }
    let (p, o) = if m[0][0].abs() >= m[1][0].abs() { (0, 1) } else { (1, 0) };
    let l = m[o][0] / m[p][0];
    let u22 = m[o][1] - l * m[p][1];
    let y = r[o] - l * r[p];
    let x1 = y / u22;
    let x0 = (r[p] - m[p][1] * x1) / m[p][0];
    Ok([x0, x1])
}

/// Smooth-pasted risk-adjusted solution on the symmetric band.
pub fn solve_smooth_pasting(params: &ModelParams) -> Result<StationarySolution> {
    solve_smooth_pasting_on(params, -params.f_bar, params.f_bar)
}

/// Smooth-pasted risk-adjusted solution on a general interval `[lo, hi]`.
pub fn solve_smooth_pasting_on(
    params: &ModelParams,
    lo: f64,
    hi: f64,
) -> Result<StationarySolution> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::domain("band must satisfy lo < hi"));
    }
    let ModelParams {
        alpha, beta, sigma, ..
    } = *params;
    let s2 = sigma * sigma;
    let d = 2.0 * alpha + beta * beta * (1.0 - s2);
    if d.abs() <= 1e-12 * (2.0 * alpha + beta * beta * (1.0 + s2)) {
        return Err(Error::Singular(
            "2 alpha + beta^2 (1 - sigma^2) vanishes; no particular solution of this form".into(),
        ));
    }
    let m = (beta * beta + 2.0 * alpha).sqrt() / sigma;
    let mut basis = Basis {
        a_edge: 0.0,
        b_edge: 0.0,
        m,
        p: 2.0 * alpha / d,
        q: 4.0 * alpha * beta * s2 / (d * d),
    };
    let hl = homogeneous(m, beta, lo, hi, lo);
    let hh = homogeneous(m, beta, lo, hi, hi);
    let pl = particular(&basis, beta, lo);
    let ph = particular(&basis, beta, hi);
    let [a_edge, b_edge] = solve2(
        [[hl.g1[1], hl.g2[1]], [hh.g1[1], hh.g2[1]]],
        [-pl[1], -ph[1]],
    )?;
    basis.a_edge = a_edge;
    basis.b_edge = b_edge;
    Ok(StationarySolution {
        params: *params,
        kind: StationaryKind::Dmps,
        a: a_edge * (-m * hi).exp(),
        b: b_edge * (m * lo).exp(),
        lo,
        hi,
        basis: Some(basis),
        ou: None,
    })
}

/// Gaussian closed form `X_0(f) = f - sinh(rho0 f) / (rho0 cosh(rho0 f_bar))`
/// with `rho0 = sqrt(2 alpha) / sigma`.
pub fn gaussian_stationary(params: &ModelParams) -> Result<StationarySolution> {
    if params.beta != 0.0 {
        return Err(Error::domain("the Gaussian solution requires beta = 0"));
    }
    let fb = params.f_bar;
    let rho0 = (2.0 * params.alpha).sqrt() / params.sigma;
    // -sinh(rho0 f)/(rho0 cosh(rho0 fb)) split into edge-anchored exponentials
    let den = rho0 * (1.0 + (-2.0 * rho0 * fb).exp());
    let basis = Basis {
        a_edge: -1.0 / den,
        b_edge: 1.0 / den,
        m: rho0,
        p: 1.0,
        q: 0.0,
    };
    let a = -1.0 / (rho0 * (rho0 * fb).cosh());
    Ok(StationarySolution {
        params: *params,
        kind: StationaryKind::Gaussian,
        a: a / 2.0,
        b: -a / 2.0,
        lo: -fb,
        hi: fb,
        basis: Some(basis),
        ou: None,
    })
}

fn ou_jet(o: &OuTerms, p: &ModelParams, a: f64, b: f64, f: f64) -> Result<Jet> {
    let (phi1, phi2) = ou_basis(o, p, f)?;
    Ok(Jet {
        value: a * phi1[0] + b * phi2[0] + o.slope * f + o.intercept,
        d1: a * phi1[1] + b * phi2[1] + o.slope,
        d2: a * phi1[2] + b * phi2[2],
    })
}

/// Even and odd Kummer solutions with two derivatives.
fn ou_basis(o: &OuTerms, p: &ModelParams, f: f64) -> Result<([f64; 3], [f64; 3])> {
    let lam = o.lambda_speed;
    let s2 = p.sigma * p.sigma;
    let a = o.kummer_a;
    let x = f - o.mu;
    let z = lam * x * x / s2;
    let dz = 2.0 * lam * x / s2;
    let ddz = 2.0 * lam / s2;
    let sl = lam.sqrt() / p.sigma;
    let y = sl * x;

    let m0 = kummer_1f1(a, 0.5, z)?;
    let m1 = kummer_1f1(a + 1.0, 1.5, z)?;
    let m2 = kummer_1f1(a + 2.0, 2.5, z)?;
    // d/dz M(a, b, z) = (a / b) M(a + 1, b + 1, z)
    let e_z = 2.0 * a * m1;
    let e_zz = 2.0 * a * ((a + 1.0) / 1.5) * m2;
    let phi1 = [m0, e_z * dz, e_zz * dz * dz + e_z * ddz];

    let c = a + 0.5;
    let n0 = kummer_1f1(c, 1.5, z)?;
    let n1 = kummer_1f1(c + 1.0, 2.5, z)?;
    let n2 = kummer_1f1(c + 2.0, 3.5, z)?;
    let o_z = c / 1.5 * n1;
    let o_zz = c / 1.5 * (c + 1.0) / 2.5 * n2;
    let n_f = o_z * dz;
    let n_ff = o_zz * dz * dz + o_z * ddz;
    let phi2 = [y * n0, sl * n0 + y * n_f, 2.0 * sl * n_f + y * n_ff];
    Ok((phi1, phi2))
}

/// Stationary solution for mean-reverting fundamentals with speed
/// `lambda_speed` and level `mu`:
/// `A 1F1(a; 1/2; z) + B y 1F1(a + 1/2; 3/2; z) + [lambda mu (1-r) f + r alpha] / [lambda (1-r) + alpha]`
/// with `a = alpha / (2 lambda (1-r))`, `z = lambda (f-mu)^2 / sigma^2`,
/// `y = sqrt(lambda) (f-mu) / sigma`.
pub fn ou_stationary(lambda_speed: f64, mu: f64, params: &ModelParams) -> Result<StationarySolution> {
    if !(lambda_speed.is_finite() && lambda_speed > 0.0) {
        return Err(Error::domain("lambda_speed must be positive"));
    }
    if !mu.is_finite() {
        return Err(Error::domain("mu must be finite"));
    }
    let r = params.r_share;
    let lam_r = lambda_speed * (1.0 - r);
    let den = lam_r + params.alpha;
    let terms = OuTerms {
        lambda_speed,
        mu,
        kummer_a: params.alpha / (2.0 * lam_r),
        slope: lambda_speed * mu * (1.0 - r) / den,
        intercept: r * params.alpha / den,
    };
    let (lo, hi) = (-params.f_bar, params.f_bar);
    let (l1, l2) = ou_basis(&terms, params, lo)?;
    let (h1, h2) = ou_basis(&terms, params, hi)?;
    let [a, b] = solve2(
        [[l1[1], l2[1]], [h1[1], h2[1]]],
        [-terms.slope, -terms.slope],
    )?;
    Ok(StationarySolution {
        params: *params,
        kind: StationaryKind::Ou,
        a,
        b,
        lo,
        hi,
        basis: None,
        ou: Some(terms),
    })
}
