//! The q -> p asymptotics: the amplitude theta_p, the derivative of the
//! Rayleigh minimum at q = p, q-sweeps with eigenpair extraction, and the
//! machine-checkable bounds (sup-norm lower/upper estimates, the torsional
//! eigenvalue lower bound, Picone's inequality, the L^infty/L^1 estimate
//! and its constants).

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{PlapError, Result};
use crate::mesh::{lp_norm, sup_norm, unit_ball_volume, GridFunction, Mesh};
use crate::operator::{critical_exponent, source_integral, ExponentParams};
use crate::solver::{
    eigen_extract, min_rayleigh, solve_lane_emden, SolveReport, SolverConfig,
};

/// theta_p = exp(||e_p||_p^{-p} * integral e_p^p |ln e_p|).
#[derive(Debug, Clone, Copy)]
pub struct ThetaResult {
    pub theta: f64,
    /// integral e_p^p |ln e_p| dx.
    pub integral: f64,
    /// ||e_p||_p^p.
    pub normalizer: f64,
}

/// Amplitude of the q -> p limit, computed from a sup-normalized first
/// eigenfunction (the input is renormalized if its sup deviates from 1).
/// The integrand `t^p |ln t|` uses its continuous extension 0 at t = 0.
pub fn theta(e_p: &GridFunction, p: f64) -> Result<ThetaResult> {
    if !(p > 1.0) {
        return Err(PlapError::InvalidParams(format!("theta needs p > 1, got {p}")));
    }
    let (sup, _) = sup_norm(e_p);
    if sup == 0.0 {
        return Err(PlapError::ZeroFunction);
    }
    let mesh = e_p.mesh();
    let vals = e_p.values();
    let mut integral = 0.0;
    let mut normalizer = 0.0;
    for i in 0..vals.len() {
        let t = (vals[i] / sup).max(0.0);
        let tp = if p == 2.0 { t * t } else { t.powf(p) };
        normalizer += mesh.node_weight(i) * tp;
        if t > 1e-300 {
            integral += mesh.node_weight(i) * tp * (-t.ln());
        }
    }
    if normalizer == 0.0 {
        return Err(PlapError::ZeroFunction);
    }
    Ok(ThetaResult { theta: (integral / normalizer).exp(), integral, normalizer })
}

/// Closed-form derivative of the Rayleigh minimum at q = p:
/// `lambda_p ln(theta_p ||e_p||_p)`.
pub fn lambda_derivative_closed(lambda_p: f64, theta_p: f64, ep_lp_norm: f64) -> Result<f64> {
    if !(lambda_p > 0.0 && theta_p > 0.0 && ep_lp_norm > 0.0) {
        return Err(PlapError::InvalidParams(
            "lambda_derivative_closed needs positive inputs".into(),
        ));
    }
    Ok(lambda_p * (theta_p * ep_lp_norm).ln())
}

/// `Lambda_q = lambda ||u||_q^q / ||u||_p^p` with the operator quadrature
/// (the same integrals the Rayleigh minimum and Nehari identity use, so
/// the lower bound `Lambda_q >= lambda_p^h` holds at discrete solutions).
pub fn capital_lambda(u: &GridFunction, lambda: f64, p: f64, q: f64) -> Result<f64> {
    let num = source_integral(u, q);
    let den = source_integral(u, p);
    if den == 0.0 {
        return Err(PlapError::ZeroFunction);
    }
    Ok(lambda * num / den)
}

/// One row of a q-sweep, mirroring the CSV schema.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub q: f64,
    pub lambda: f64,
    pub sup_norm: f64,
    pub l1_norm: f64,
    pub lq_norm: f64,
    pub lp_norm: f64,
    pub mu: f64,
    pub capital_lambda: f64,
    pub lambda_q: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Sweep over q with fixed (p, lambda): per-q Lane-Emden solves, Rayleigh
/// minima and extracted eigenvalue estimates, rows ascending in q.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub p: f64,
    pub lambda: f64,
    /// Norm index used for the mu column (infinity = sup norm).
    pub s: f64,
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: &str =
    "q,lambda,sup_norm,l1_norm,lq_norm,lp_norm,mu,capital_lambda,lambda_q,residual,iterations,converged";

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.q,
                r.lambda,
                r.sup_norm,
                r.l1_norm,
                r.lq_norm,
                r.lp_norm,
                r.mu,
                r.capital_lambda,
                r.lambda_q,
                r.residual,
                r.iterations,
                r.converged
            ));
        }
        out
    }

    /// Parse the exact schema written by [`SweepResult::to_csv`].
    pub fn from_csv(text: &str, p: f64, s: f64) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| PlapError::Schema("empty file".into()))?;
        if header.trim() != SWEEP_CSV_HEADER {
            return Err(PlapError::Schema(format!("unexpected header `{header}`")));
        }
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(PlapError::Schema(format!("row {} has {} fields", k + 2, f.len())));
            }
            let num = |i: usize| -> Result<f64> {
                f[i].parse::<f64>()
                    .map_err(|_| PlapError::Schema(format!("bad number `{}` in row {}", f[i], k + 2)))
            };
            rows.push(SweepRow {
                q: num(0)?,
                lambda: num(1)?,
                sup_norm: num(2)?,
                l1_norm: num(3)?,
                lq_norm: num(4)?,
                lp_norm: num(5)?,
                mu: num(6)?,
                capital_lambda: num(7)?,
                lambda_q: num(8)?,
                residual: num(9)?,
                iterations: num(10)? as usize,
                converged: f[11].trim() == "true",
            });
        }
        if rows.is_empty() {
            return Err(PlapError::Schema("no data rows".into()));
        }
        let lambda = rows[0].lambda;
        Ok(Self { p, lambda, s, rows })
    }
}

/// Default q-grid: `p * {0.90, 0.95, 0.975, 1.025, 1.05, 1.10}` clipped to
/// `[1, p*)`.
pub fn default_q_grid(p: f64, dim: u32) -> Vec<f64> {
    let pstar = critical_exponent(p, dim);
    [0.90, 0.95, 0.975, 1.025, 1.05, 1.10]
        .iter()
        .map(|f| f * p)
        .filter(|&q| (1.0..pstar).contains(&q))
        .collect()
}

/// Per-q outcome: the CSV row plus the solution itself (when the solver
/// produced one), so callers can run bound checks and export profiles.
#[derive(Debug, Clone)]
pub struct QSolve {
    pub row: SweepRow,
    pub solution: Option<(GridFunction, SolveReport)>,
}

/// Run the sweep and keep the per-q solutions. Independent q values run in
/// parallel (`PLAP_THREADS` caps the pool); rows are merged ascending in q.
pub fn q_sweep_full(
    mesh: &Arc<Mesh>,
    p: f64,
    lambda: f64,
    q_grid: &[f64],
    s: f64,
    cfg: &SolverConfig,
) -> Result<Vec<QSolve>> {
    cfg.validate()?;
    let dim = mesh.spec().dimension();
    let pstar = critical_exponent(p, dim);
    if q_grid.is_empty() {
        return Err(PlapError::InvalidParams("q_grid must not be empty".into()));
    }
    for &q in q_grid {
        if q == p {
            return Err(PlapError::Config("q_grid must exclude p".into()));
        }
        if !(1.0..pstar).contains(&q) {
            return Err(PlapError::InvalidParams(format!(
                "q = {q} outside [1, p*) with p* = {pstar}"
            )));
        }
    }
    let mut grid: Vec<f64> = q_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    let run = || -> Vec<QSolve> {
        grid.par_iter().map(|&q| solve_one_q(mesh, p, lambda, q, s, cfg)).collect()
    };
    let solves = match thread_cap() {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| PlapError::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    Ok(solves)
}

/// Sweep wrapper returning only the table.
pub fn q_sweep(
    mesh: &Arc<Mesh>,
    p: f64,
    lambda: f64,
    q_grid: &[f64],
    s: f64,
    cfg: &SolverConfig,
) -> Result<SweepResult> {
    let rows = q_sweep_full(mesh, p, lambda, q_grid, s, cfg)?
        .into_iter()
        .map(|qs| qs.row)
        .collect();
    Ok(SweepResult { p, lambda, s, rows })
}

fn thread_cap() -> Option<usize> {
    std::env::var("PLAP_THREADS").ok()?.parse::<usize>().ok().filter(|&k| k >= 1)
}

fn solve_one_q(mesh: &Arc<Mesh>, p: f64, lambda: f64, q: f64, s: f64, cfg: &SolverConfig) -> QSolve {
    let failed_row = |q: f64| SweepRow {
        q,
        lambda,
        sup_norm: f64::NAN,
        l1_norm: f64::NAN,
        lq_norm: f64::NAN,
        lp_norm: f64::NAN,
        mu: f64::NAN,
        capital_lambda: f64::NAN,
        lambda_q: f64::NAN,
        residual: f64::NAN,
        iterations: 0,
        converged: false,
    };

    let dim = mesh.spec().dimension();
    let params = match ExponentParams::new(p, q, lambda, dim)
        .and_then(|pr| pr.with_eps_reg(cfg.eps_reg))
    {
        Ok(pr) => pr,
        Err(_) => return QSolve { row: failed_row(q), solution: None },
    };
    let lambda_q = match min_rayleigh(mesh, p, q, cfg) {
        Ok((lq, _, _)) => lq,
        Err(_) => f64::NAN,
    };
    match solve_lane_emden(mesh, &params, cfg) {
        Ok((u, report)) => {
            let mu = eigen_extract(&u, lambda, p, q, s).map(|e| e.mu).unwrap_or(f64::NAN);
            let cl = capital_lambda(&u, lambda, p, q).unwrap_or(f64::NAN);
            let row = SweepRow {
                q,
                lambda,
                sup_norm: sup_norm(&u).0,
                l1_norm: lp_norm(&u, 1.0).unwrap_or(f64::NAN),
                lq_norm: lp_norm(&u, q).unwrap_or(f64::NAN),
                lp_norm: lp_norm(&u, p).unwrap_or(f64::NAN),
                mu,
                capital_lambda: cl,
                lambda_q,
                residual: report.residual,
                iterations: report.iterations,
                converged: report.converged,
            };
            QSolve { row, solution: Some((u, report)) }
        }
        Err(_) => QSolve { row: failed_row(q), solution: None },
    }
}

/// Central-difference estimate of `d lambda_q / dq` at q = p from the
/// sweep's Rayleigh-minimum column, taken at the smallest symmetric pair.
pub fn fit_derivative(sweep: &SweepResult, p: f64) -> Result<f64> {
    let rows: Vec<&SweepRow> =
        sweep.rows.iter().filter(|r| r.converged && r.lambda_q.is_finite()).collect();
    let mut best: Option<(f64, f64)> = None; // (delta, estimate)
    for lo in &rows {
        if lo.q >= p {
            continue;
        }
        for hi in &rows {
            if hi.q <= p {
                continue;
            }
            let delta = hi.q - p;
            if ((p - lo.q) - delta).abs() <= 1e-9 {
                let est = (hi.lambda_q - lo.lambda_q) / (2.0 * delta);
                if best.map_or(true, |(d, _)| delta < d) {
                    best = Some((delta, est));
                }
            }
        }
    }
    best.map(|(_, est)| est)
        .ok_or_else(|| PlapError::Degenerate("no symmetric q-pairs around p in sweep".into()))
}

/// Least-squares slope of `ln |Lambda_q / mu_q - 1|` against `ln |q - p|`,
/// pooling both sides of p. Requires at least three usable rows.
pub fn fit_rate(sweep: &SweepResult, p: f64) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in &sweep.rows {
        if !r.converged || !r.capital_lambda.is_finite() || !r.mu.is_finite() {
            continue;
        }
        let gap = (r.capital_lambda / r.mu - 1.0).abs();
        let dq = (r.q - p).abs();
        if gap > 0.0 && dq > 0.0 {
            xs.push(dq.ln());
            ys.push(gap.ln());
        }
    }
    if xs.len() < 3 {
        return Err(PlapError::Degenerate(format!(
            "fit_rate needs at least 3 rows with nonzero gaps, got {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(PlapError::Degenerate("fit_rate: all q-gaps equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// One machine-checked inequality: `lhs <= rhs` up to the report tolerance
/// `1e-8 * max(1, |rhs|)`.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub satisfied: bool,
    pub slack: f64,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        let satisfied = slack >= -1e-8 * rhs.abs().max(1.0) && lhs.is_finite() && rhs.is_finite();
        Self { name: name.into(), lhs, rhs, satisfied, slack }
    }
}

/// Reference quantities the bound checks compare against.
#[derive(Debug, Clone)]
pub struct BoundContext {
    /// Sup-normalized first eigenfunction.
    pub e_p: GridFunction,
    /// Torsion function of the same mesh.
    pub phi_p: GridFunction,
    /// Discrete first eigenvalue.
    pub lambda_p: f64,
}

/// Sup-norm and eigenvalue bounds for a computed Lane-Emden solution:
///
/// * `sup_lower_bound` (resonant lambda only): `||u||_inf >= A` with
///   `A = |Omega|^{-1} integral e_p^p` below p and `A = 1` above;
/// * `sup_upper_bound` (q < p): `||u||_inf^{p-q} <= lambda ||phi_p||_inf^{p-1}`
///   (torsion-multiple comparison);
/// * `torsional_lower_bound`: `||phi_p||_inf^{1-p} <= lambda_p`;
/// * `capital_lambda_bound`: `lambda_p <= Lambda_q`.
pub fn check_bounds(
    u: &GridFunction,
    lambda: f64,
    p: f64,
    q: f64,
    ctx: &BoundContext,
) -> Result<Vec<BoundCheck>> {
    let mut checks = Vec::new();
    let mesh = u.mesh();
    let sup_u = sup_norm(u).0;
    let phi_sup = sup_norm(&ctx.phi_p).0;
    let resonant = (lambda - ctx.lambda_p).abs() <= 1e-6 * ctx.lambda_p;

    if resonant {
        let a = if q < p {
            let ep_p = mesh.integrate_nodal(|i| {
                let t = ctx.e_p.values()[i].abs();
                if p == 2.0 {
                    t * t
                } else {
                    t.powf(p)
                }
            });
            ep_p / mesh.spec().measure()
        } else {
            1.0
        };
        checks.push(BoundCheck::new("sup_lower_bound", a, sup_u));
    }
    if q < p {
        checks.push(BoundCheck::new(
            "sup_upper_bound",
            sup_u.powf(p - q),
            lambda * phi_sup.powf(p - 1.0),
        ));
    }
    checks.push(BoundCheck::new("torsional_lower_bound", phi_sup.powf(1.0 - p), ctx.lambda_p));
    checks.push(BoundCheck::new(
        "capital_lambda_bound",
        ctx.lambda_p,
        capital_lambda(u, lambda, p, q)?,
    ));
    Ok(checks)
}

/// The level-set sup-norm estimate
/// `||u||_inf <= (lambda^{N/p} K_{N,p} ||u||_1)^{p/(p+N(p-q))}`,
/// valid for `1 <= q < p(N+1)/N`.
pub fn check_linfty(u: &GridFunction, lambda: f64, p: f64, q: f64, dim: u32) -> Result<BoundCheck> {
    let hi = p * (dim as f64 + 1.0) / dim as f64;
    if !(1.0..hi).contains(&q) {
        return Err(PlapError::ValidityRange { q, lo: 1.0, hi });
    }
    let (_, k_np, _) = constants(dim, p)?;
    let n = dim as f64;
    let l1 = lp_norm(u, 1.0)?;
    let rhs = (lambda.powf(n / p) * k_np * l1).powf(p / (p + n * (p - q)));
    Ok(BoundCheck::new("linfty", sup_norm(u).0, rhs))
}

/// The embedding constants: `omega_N`, `C_{N,p} = N omega_N^{p/N}
/// (p/(p-1))^{p-1}` and `K_{N,p} = C_{N,p}^{-N/p} ((p+N(p-1))/p)^{(p+N(p-1))/p}`.
/// Returns `(C_{N,p}, K_{N,p}, omega_N)`.
pub fn constants(dim: u32, p: f64) -> Result<(f64, f64, f64)> {
    if !(1..=3).contains(&dim) {
        return Err(PlapError::InvalidParams(format!("constants: unsupported dimension {dim}")));
    }
    if !(p > 1.0) {
        return Err(PlapError::InvalidParams(format!("constants: p must exceed 1, got {p}")));
    }
    let n = dim as f64;
    let omega = unit_ball_volume(dim);
    let c = n * omega.powf(p / n) * (p / (p - 1.0)).powf(p - 1.0);
    let expo = (p + n * (p - 1.0)) / p;
    let k = c.powf(-n / p) * expo.powf(expo);
    Ok((c, k, omega))
}

/// Closed-form torsion function of the N-ball of radius R:
/// `Phi_p(r) = (p-1)/p N^{-1/(p-1)} (R^{p/(p-1)} - r^{p/(p-1)})`.
pub fn ball_torsion_closed(radius: f64, dim: u32, p: f64, r: f64) -> Result<f64> {
    if !(1..=3).contains(&dim) || !(p > 1.0) || !(radius > 0.0) {
        return Err(PlapError::InvalidParams(format!(
            "ball torsion needs R > 0, p > 1, N in 1..=3; got R={radius}, p={p}, N={dim}"
        )));
    }
    if !(0.0..=radius).contains(&r) {
        return Err(PlapError::InvalidParams(format!("radius {r} outside [0, {radius}]")));
    }
    let e = p / (p - 1.0);
    Ok((p - 1.0) / p * (dim as f64).powf(-1.0 / (p - 1.0)) * (radius.powf(e) - r.powf(e)))
}

/// Picone gap `integral |grad u|^p - integral |grad v|^{p-2} grad v .
/// grad(u^p / v^{p-1})`; nonnegative for differentiable `u >= 0`, `v > 0`.
/// `v` is floored at 1e-12 inside the quotient.
pub fn picone_gap(u: &GridFunction, v: &GridFunction, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(PlapError::InvalidParams(format!("picone needs p > 1, got {p}")));
    }
    let mesh = u.mesh();
    for i in 0..v.values().len() {
        if !mesh.is_boundary(i) && !(v.values()[i] > 0.0) {
            return Err(PlapError::InvalidParams(
                "picone comparison function must be positive at interior nodes".into(),
            ));
        }
    }
    let quotient: Vec<f64> = u
        .values()
        .iter()
        .zip(v.values())
        .map(|(&ui, &vi)| {
            let up = if p == 2.0 { ui * ui } else { ui.abs().powf(p) };
            up / vi.max(1e-12).powf(p - 1.0)
        })
        .collect();
    let w = GridFunction::new(mesh.clone(), quotient)?;

    let mut lhs = 0.0;
    mesh.for_each_cell(u.values(), |wc, g, _, _, _, _| {
        let g2 = g[0] * g[0] + g[1] * g[1];
        lhs += wc * if p == 2.0 { g2 } else { g2.sqrt().powf(p) };
    });

    // second form needs both gradients per cell; collect v's first
    let mut gv = Vec::with_capacity(mesh.cell_count());
    mesh.for_each_cell(v.values(), |_, g, _, _, _, _| gv.push(g));
    let mut rhs = 0.0;
    let mut c = 0usize;
    mesh.for_each_cell(w.values(), |wc, gw, _, _, _, _| {
        let g = gv[c];
        c += 1;
        let g2 = g[0] * g[0] + g[1] * g[1];
        let weight = if p == 2.0 {
            1.0
        } else if g2 == 0.0 {
            0.0
        } else {
            g2.powf(0.5 * (p - 2.0))
        };
        rhs += wc * weight * (g[0] * gw[0] + g[1] * gw[1]);
    });
    Ok(lhs - rhs)
}

/// `max_{0<=t<=1} |t^p - t^q| = (1/p)(p/q)^{q/(q-p)} |q - p|`.
pub fn uq_bound_value(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0) {
        return Err(PlapError::InvalidParams(format!("uq_bound needs positive exponents, got {p}, {q}")));
    }
    if p == q {
        return Err(PlapError::Degenerate("uq_bound undefined at q = p".into()));
    }
    Ok((1.0 / p) * (p / q).powf(q / (q - p)) * (q - p).abs())
}

/// Limit of `uq_bound_value(p, q) / |q - p|` as q -> p: `1/(p e)`.
pub fn uq_bound_limit_factor(p: f64) -> f64 {
    1.0 / (p * std::f64::consts::E)
}
