//! Independent 1D reference solutions on (0,1): a shooting method for the
//! p-Laplacian eigenproblem and the Lane-Emden equation, plus the p=2
//! closed forms.
//!
//! The first-order system uses the flux variable `w = |u'|^{p-2} u'`, so
//! the right-hand side never differentiates the degenerate modulus:
//!
//! ```text
//! u' = sign(w) |w|^{1/(p-1)},    w' = -lambda |u|^{q-2} u.
//! ```
//!
//! Integration is an adaptive Dormand-Prince 5(4) pair with steps clamped
//! to land exactly on a fixed fine sample grid; bisection drives either
//! `lambda` (eigen mode, u'(0) = 1) or the initial slope `alpha`
//! (Lane-Emden mode) until the first zero of `u` lands at x = 1.

use crate::error::{PlapError, Result};
use crate::operator::signed_pow;

/// Number of sample points of the returned profile (uniform on [0,1]).
const SAMPLES: usize = 4097;
/// Bisection bracket for the eigen mode.
const LAMBDA_BRACKET: (f64, f64) = (1.0, 1e4);
/// Bisection bracket for the initial slope in Lane-Emden mode.
const ALPHA_BRACKET: (f64, f64) = (1e-6, 1e3);
const MAX_BISECTIONS: usize = 200;

/// Outcome of a shooting solve.
#[derive(Debug, Clone)]
pub struct ShootingResult {
    /// The bisected parameter: lambda in eigen mode, the slope alpha in
    /// Lane-Emden mode.
    pub param: f64,
    /// Sample abscissae (uniform grid on [0,1]).
    pub xs: Vec<f64>,
    /// Solution values at `xs`.
    pub us: Vec<f64>,
    pub bisections: usize,
    /// |u(1)| / sup u after the final integration.
    pub boundary_mismatch: f64,
}

impl ShootingResult {
    /// Piecewise-linear interpolation of the sampled profile.
    pub fn sample(&self, x: f64) -> f64 {
        let n = self.xs.len();
        let h = 1.0 / (n - 1) as f64;
        let t = (x / h).floor();
        let i = (t as usize).min(n - 2);
        let frac = (x - self.xs[i]) / h;
        self.us[i] * (1.0 - frac) + self.us[i + 1] * frac
    }

    pub fn sup(&self) -> f64 {
        self.us.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
    }
}

struct Rhs {
    p: f64,
    q: f64,
    lambda: f64,
}

impl Rhs {
    #[inline]
    fn eval(&self, y: [f64; 2]) -> [f64; 2] {
        let up = if y[1] == 0.0 {
            0.0
        } else {
            y[1].signum() * y[1].abs().powf(1.0 / (self.p - 1.0))
        };
        [up, -self.lambda * signed_pow(y[0], self.q)]
    }
}

/// One Dormand-Prince 5(4) step; returns (y5, scaled error estimate).
fn dopri5_step(rhs: &Rhs, y: [f64; 2], h: f64, k1: [f64; 2]) -> ([f64; 2], [f64; 2], f64) {
    #[inline]
    fn ax(y: [f64; 2], h: f64, ks: &[([f64; 2], f64)]) -> [f64; 2] {
        let mut out = y;
        for (k, c) in ks {
            out[0] += h * c * k[0];
            out[1] += h * c * k[1];
        }
        out
    }
    let k2 = rhs.eval(ax(y, h, &[(k1, 1.0 / 5.0)]));
    let k3 = rhs.eval(ax(y, h, &[(k1, 3.0 / 40.0), (k2, 9.0 / 40.0)]));
    let k4 = rhs.eval(ax(y, h, &[(k1, 44.0 / 45.0), (k2, -56.0 / 15.0), (k3, 32.0 / 9.0)]));
    let k5 = rhs.eval(ax(
        y,
        h,
        &[
            (k1, 19372.0 / 6561.0),
            (k2, -25360.0 / 2187.0),
            (k3, 64448.0 / 6561.0),
            (k4, -212.0 / 729.0),
        ],
    ));
    let k6 = rhs.eval(ax(
        y,
        h,
        &[
            (k1, 9017.0 / 3168.0),
            (k2, -355.0 / 33.0),
            (k3, 46732.0 / 5247.0),
            (k4, 49.0 / 176.0),
            (k5, -5103.0 / 18656.0),
        ],
    ));
    let y5 = ax(
        y,
        h,
        &[
            (k1, 35.0 / 384.0),
            (k3, 500.0 / 1113.0),
            (k4, 125.0 / 192.0),
            (k5, -2187.0 / 6784.0),
            (k6, 11.0 / 84.0),
        ],
    );
    let k7 = rhs.eval(y5);
    // coefficients of y5 - y4
    let e = [
        (k1, 35.0 / 384.0 - 5179.0 / 57600.0),
        (k3, 500.0 / 1113.0 - 7571.0 / 16695.0),
        (k4, 125.0 / 192.0 - 393.0 / 640.0),
        (k5, -2187.0 / 6784.0 + 92097.0 / 339200.0),
        (k6, 11.0 / 84.0 - 187.0 / 2100.0),
        (k7, -1.0 / 40.0),
    ];
    let mut err = [0.0, 0.0];
    for (k, c) in e {
        err[0] += h * c * k[0];
        err[1] += h * c * k[1];
    }
    let scale0 = 1e-12 + y[0].abs().max(y5[0].abs());
    let scale1 = 1e-12 + y[1].abs().max(y5[1].abs());
    let emax = (err[0] / scale0).abs().max((err[1] / scale1).abs());
    (y5, k7, emax)
}

/// Integrate from x=0 with initial slope `alpha`. When `record` is set the
/// profile is written onto the uniform sample grid. Returns (u(1), stayed
/// positive on (0,1)). Exits early once u drops below zero.
fn integrate(rhs: &Rhs, alpha: f64, rtol: f64, mut record: Option<&mut Vec<f64>>) -> (f64, bool) {
    let w0 = alpha.signum() * alpha.abs().powf(rhs.p - 1.0);
    let mut y = [0.0, w0];
    let mut x = 0.0_f64;
    let grid = 1.0 / (SAMPLES - 1) as f64;
    let mut next_sample = 1usize;
    if let Some(out) = record.as_deref_mut() {
        out.clear();
        out.push(0.0);
    }
    let mut h = grid;
    let mut k1 = rhs.eval(y);
    let mut steps = 0usize;
    while x < 1.0 - 1e-15 {
        let target = next_sample as f64 * grid;
        let mut hs = h.min(target - x).max(1e-14);
        let clamped = hs >= target - x - 1e-15;
        if clamped {
            hs = target - x;
        }
        let (y5, k7, err) = dopri5_step(rhs, y, hs, k1);
        if err <= rtol || hs <= 1e-13 {
            y = y5;
            k1 = k7;
            x += hs;
            if clamped {
                if let Some(out) = record.as_deref_mut() {
                    out.push(y[0]);
                }
                next_sample += 1;
            }
            if y[0] < 0.0 && x < 1.0 - 1e-15 {
                return (y[0], false);
            }
            let grow = if err > 0.0 { 0.9 * (rtol / err).powf(0.2) } else { 5.0 };
            h = (hs * grow.clamp(0.2, 5.0)).min(0.05);
        } else {
            h = hs * (0.9 * (rtol / err).powf(0.2)).clamp(0.1, 1.0);
        }
        steps += 1;
        if steps > 2_000_000 {
            break;
        }
    }
    (y[0], true)
}

fn bisect(
    mut predicate: impl FnMut(f64) -> bool,
    bracket: (f64, f64),
    tol: f64,
    what: &str,
) -> Result<(f64, usize)> {
    let (mut lo, mut hi) = bracket;
    let plo = predicate(lo);
    let phi = predicate(hi);
    if plo == phi {
        return Err(PlapError::BracketFailure(format!(
            "no sign change for {what} in [{lo}, {hi}]"
        )));
    }
    let mut n = 0;
    while hi - lo > tol * lo.abs().max(1.0) && n < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if predicate(mid) == plo {
            lo = mid;
        } else {
            hi = mid;
        }
        n += 1;
    }
    Ok((0.5 * (lo + hi), n))
}

/// First eigenpair of the 1D p-Laplacian on (0,1) by shooting: integrates
/// with u(0)=0, u'(0)=1 and bisects lambda until the first zero of u lands
/// at x=1. The returned profile is sup-normalized.
pub fn shoot_1d_eigen(p: f64, tol: f64) -> Result<ShootingResult> {
    if !(p > 1.0) {
        return Err(PlapError::InvalidParams(format!("shooting needs p > 1, got {p}")));
    }
    if !(tol > 0.0) {
        return Err(PlapError::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let rtol = tol / 10.0;
    let positive = |lambda: f64| {
        let rhs = Rhs { p, q: p, lambda };
        let (u1, stayed) = integrate(&rhs, 1.0, rtol, None);
        stayed && u1 > 0.0
    };
    let (lambda, bisections) = bisect(positive, LAMBDA_BRACKET, tol / 10.0, "lambda")?;
    let rhs = Rhs { p, q: p, lambda };
    let mut us = Vec::with_capacity(SAMPLES);
    integrate(&rhs, 1.0, rtol, Some(&mut us));
    finalize(lambda, us, bisections, true)
}

/// Positive solution of the 1D Lane-Emden problem on (0,1) by shooting on
/// the initial slope. Requires `q != p`; the profile is not normalized.
pub fn shoot_1d_lane_emden(p: f64, q: f64, lambda: f64, tol: f64) -> Result<ShootingResult> {
    if !(p > 1.0) || !(q >= 1.0) || !(lambda > 0.0) {
        return Err(PlapError::InvalidParams(format!(
            "shooting needs p > 1, q >= 1, lambda > 0; got p={p} q={q} lambda={lambda}"
        )));
    }
    if q == p {
        return Err(PlapError::ResonantExponent);
    }
    if !(tol > 0.0) {
        return Err(PlapError::InvalidParams(format!("tolerance must be positive, got {tol}")));
    }
    let rtol = tol / 10.0;
    let positive = |alpha: f64| {
        let rhs = Rhs { p, q, lambda };
        let (u1, stayed) = integrate(&rhs, alpha, rtol, None);
        stayed && u1 > 0.0
    };
    let (alpha, bisections) = bisect(positive, ALPHA_BRACKET, tol / 10.0, "alpha")?;
    let rhs = Rhs { p, q, lambda };
    let mut us = Vec::with_capacity(SAMPLES);
    integrate(&rhs, alpha, rtol, Some(&mut us));
    finalize(alpha, us, bisections, false)
}

fn finalize(param: f64, mut us: Vec<f64>, bisections: usize, normalize: bool) -> Result<ShootingResult> {
    while us.len() < SAMPLES {
        us.push(0.0);
    }
    let sup = us.iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
    if sup == 0.0 {
        return Err(PlapError::ZeroFunction);
    }
    let boundary_mismatch = us[SAMPLES - 1].abs() / sup;
    if normalize {
        for v in &mut us {
            *v /= sup;
        }
    }
    // pin the Dirichlet end exactly
    us[SAMPLES - 1] = 0.0;
    let xs = (0..SAMPLES).map(|i| i as f64 / (SAMPLES - 1) as f64).collect();
    Ok(ShootingResult { param, xs, us, bisections, boundary_mismatch })
}

/// Closed-form constants of the p = 2 problem on (0,1).
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormP2 {
    /// First eigenvalue pi^2.
    pub lambda: f64,
    /// L^2 norm of sin(pi x): 1/sqrt(2).
    pub l2_norm: f64,
    /// L^1 norm of sin(pi x): 2/pi.
    pub l1_norm: f64,
    /// theta_2 = 2 exp(-1/2).
    pub theta: f64,
    /// Sup of the torsion function x(1-x)/2: 1/8.
    pub torsion_sup: f64,
    /// d/dq of the Rayleigh minimum at q = 2: pi^2 (ln 2 - 1)/2.
    pub derivative: f64,
    /// lambda_2 * sup(torsion): pi^2 / 8, the q=1 sup-norm bound (tight).
    pub sup_bound_q1: f64,
}

/// The p = 2, 1D closed-form bundle.
pub fn closed_p2_1d() -> ClosedFormP2 {
    let pi = std::f64::consts::PI;
    let lambda = pi * pi;
    ClosedFormP2 {
        lambda,
        l2_norm: 0.5_f64.sqrt(),
        l1_norm: 2.0 / pi,
        theta: 2.0 * (-0.5_f64).exp(),
        torsion_sup: 0.125,
        derivative: lambda * (2.0_f64.ln() - 1.0) / 2.0,
        sup_bound_q1: lambda / 8.0,
    }
}

/// First eigenfunction of the p = 2 problem, sup-normalized.
pub fn e_2(x: f64) -> f64 {
    (std::f64::consts::PI * x).sin()
}
