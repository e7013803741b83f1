//! Batch orchestration: run a full experiment from an [`ExperimentConfig`]
//! and leave a machine-readable trail (sweep CSV, solution CSVs,
//! `report.json`, SVG plots) in the output directory.
//!
//! `report.json` is deterministic for a fixed config except for the
//! `timings_ms` block.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::asymptotics::{
    check_bounds, check_linfty, fit_derivative, fit_rate, lambda_derivative_closed, q_sweep_full,
    theta, BoundContext, SweepResult,
};
use crate::config::{CheckKind, ExperimentConfig, LambdaSpec};
use crate::error::Result;
use crate::mesh::{build_mesh, lp_norm};
use crate::plot::{plot_sweep, PlotKind, PlotRefs};
use crate::solver::{first_eigenpair, torsion};

#[derive(Debug, Clone, Serialize)]
pub struct EigenSummary {
    pub lambda_p: f64,
    pub theta: f64,
    pub derivative_closed: f64,
    pub derivative_fd: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub lambda: f64,
    pub s: String,
    pub rows: usize,
    pub converged_rows: usize,
    pub mu_min: Option<f64>,
    pub mu_max: Option<f64>,
    pub rate_slope: Option<f64>,
    pub max_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub q: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
}

/// Everything one run produced, serialized as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub version: String,
    pub config_hash: String,
    /// True iff every solve converged and every enabled check passed.
    pub passed: bool,
    pub eigen: EigenSummary,
    /// Sup norm of the resonant solution at the q closest to p.
    pub theta_estimate: Option<f64>,
    pub sweep: SweepSummary,
    pub checks: Vec<CheckRecord>,
    pub files: Vec<String>,
    /// Wall-clock phase timings; the only nondeterministic block.
    pub timings_ms: BTreeMap<String, u64>,
}

fn fmt_q(q: f64) -> String {
    format!("{q}")
}

/// Execute the full pipeline described by `config`: first eigenpair,
/// torsion function, theta, q-sweep, derivative and rate fits, bound
/// checks, CSV/JSON/SVG artifacts.
pub fn run(config: &ExperimentConfig, config_hash: &str, out_override: Option<&Path>) -> Result<RunManifest> {
    let out_dir: PathBuf = out_override.map(Path::to_path_buf).unwrap_or_else(|| config.output_dir.clone());
    std::fs::create_dir_all(&out_dir)?;

    let mut timings = BTreeMap::new();
    let mut files: Vec<String> = Vec::new();
    let mut all_converged = true;

    let t0 = Instant::now();
    let mesh = build_mesh(config.domain)?;
    let (lambda_p, e_p, eigen_report) = first_eigenpair(&mesh, config.p, &config.solver)?;
    all_converged &= eigen_report.converged;
    let (phi_p, torsion_report) = torsion(&mesh, config.p, &config.solver)?;
    all_converged &= torsion_report.converged;
    timings.insert("eigen_ms".to_string(), t0.elapsed().as_millis() as u64);

    let theta_res = theta(&e_p, config.p)?;
    let ep_lp = lp_norm(&e_p, config.p)?;
    let derivative_closed = lambda_derivative_closed(lambda_p, theta_res.theta, ep_lp)?;

    let lambda = match config.lambda {
        LambdaSpec::Resonant => lambda_p,
        LambdaSpec::Value(v) => v,
    };

    let t1 = Instant::now();
    let solves = q_sweep_full(&mesh, config.p, lambda, &config.q_grid, config.s, &config.solver)?;
    timings.insert("sweep_ms".to_string(), t1.elapsed().as_millis() as u64);

    let rows: Vec<_> = solves.iter().map(|qs| qs.row.clone()).collect();
    let sweep = SweepResult { p: config.p, lambda, s: config.s, rows };

    let t2 = Instant::now();
    let ctx = BoundContext { e_p: e_p.clone(), phi_p: phi_p.clone(), lambda_p };
    let mut checks: Vec<CheckRecord> = Vec::new();
    for qs in &solves {
        all_converged &= qs.row.converged;
        let Some((u, _)) = &qs.solution else { continue };
        if !qs.row.converged {
            continue;
        }
        if config.checks.contains(&CheckKind::Bounds) {
            for chk in check_bounds(u, lambda, config.p, qs.row.q, &ctx)? {
                checks.push(CheckRecord {
                    name: chk.name,
                    q: Some(qs.row.q),
                    lhs: chk.lhs,
                    rhs: chk.rhs,
                    slack: chk.slack,
                    satisfied: chk.satisfied,
                });
            }
        }
        if config.checks.contains(&CheckKind::Linfty) {
            let dim = config.domain.dimension();
            let hi = config.p * (dim as f64 + 1.0) / dim as f64;
            if (1.0..hi).contains(&qs.row.q) {
                let chk = check_linfty(u, lambda, config.p, qs.row.q, dim)?;
                checks.push(CheckRecord {
                    name: chk.name,
                    q: Some(qs.row.q),
                    lhs: chk.lhs,
                    rhs: chk.rhs,
                    slack: chk.slack,
                    satisfied: chk.satisfied,
                });
            }
        }
    }
    timings.insert("checks_ms".to_string(), t2.elapsed().as_millis() as u64);

    let derivative_fd = fit_derivative(&sweep, config.p).ok();
    let rate_slope = fit_rate(&sweep, config.p).ok();

    // artifacts
    let t3 = Instant::now();
    let write = |name: &str, contents: &str, files: &mut Vec<String>| -> Result<()> {
        std::fs::write(out_dir.join(name), contents)?;
        files.push(name.to_string());
        Ok(())
    };
    write("sweep.csv", &sweep.to_csv(), &mut files)?;
    write("e_p.csv", &e_p.to_csv(), &mut files)?;
    write("phi_p.csv", &phi_p.to_csv(), &mut files)?;
    for qs in &solves {
        if let Some((u, _)) = &qs.solution {
            write(&format!("u_q{}.csv", fmt_q(qs.row.q)), &u.to_csv(), &mut files)?;
        }
    }
    let refs = PlotRefs { theta: Some(theta_res.theta), lambda_p: Some(lambda_p) };
    for (kind, name) in [
        (PlotKind::SupnormVsQ, "supnorm_vs_q.svg"),
        (PlotKind::LambdaVsQ, "lambda_vs_q.svg"),
        (PlotKind::Rate, "rate.svg"),
    ] {
        match plot_sweep(&sweep, kind, &refs) {
            Ok(svg) => write(name, &svg, &mut files)?,
            Err(_) => {} // e.g. rate plot without usable gaps
        }
    }
    timings.insert("artifacts_ms".to_string(), t3.elapsed().as_millis() as u64);

    let converged_rows = sweep.rows.iter().filter(|r| r.converged).count();
    let finite_mu: Vec<f64> =
        sweep.rows.iter().filter(|r| r.converged && r.mu.is_finite()).map(|r| r.mu).collect();
    let theta_estimate = sweep
        .rows
        .iter()
        .filter(|r| r.converged && r.sup_norm.is_finite())
        .min_by(|a, b| {
            let da = (a.q - config.p).abs();
            let db = (b.q - config.p).abs();
            da.partial_cmp(&db).unwrap().then(a.q.partial_cmp(&b.q).unwrap())
        })
        .map(|r| r.sup_norm);

    let passed = all_converged && checks.iter().all(|c| c.satisfied);
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_hash: config_hash.to_string(),
        passed,
        eigen: EigenSummary {
            lambda_p,
            theta: theta_res.theta,
            derivative_closed,
            derivative_fd,
        },
        theta_estimate,
        sweep: SweepSummary {
            lambda,
            s: if config.s == f64::INFINITY { "inf".into() } else { format!("{}", config.s) },
            rows: sweep.rows.len(),
            converged_rows,
            mu_min: finite_mu.iter().cloned().reduce(f64::min),
            mu_max: finite_mu.iter().cloned().reduce(f64::max),
            rate_slope,
            max_residual: sweep
                .rows
                .iter()
                .filter(|r| r.residual.is_finite())
                .map(|r| r.residual)
                .reduce(f64::max),
        },
        checks,
        files: Vec::new(),
        timings_ms: timings,
    };

    let mut manifest = manifest;
    files.push("report.json".to_string());
    manifest.files = files;
    let json = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(out_dir.join("report.json"), json)?;
    Ok(manifest)
}

impl From<serde_json::Error> for crate::PlapError {
    fn from(e: serde_json::Error) -> Self {
        crate::PlapError::Config(format!("json: {e}"))
    }
}
