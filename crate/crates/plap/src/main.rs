//! `plap` - batch front-end for the Lane-Emden / p-Laplacian toolkit.
//!
//! Exit codes: 0 success, 1 non-convergence or failed checks, 2 usage or
//! configuration errors. `PLAP_THREADS` caps the per-q parallelism of
//! sweeps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use plap::asymptotics::{default_q_grid, q_sweep, theta};
use plap::config::{ExperimentConfig, LambdaSpec};
use plap::error::Result;
use plap::mesh::{build_mesh, lp_norm, sup_norm, DomainSpec};
use plap::operator::ExponentParams;
use plap::plot::{plot_sweep, PlotKind, PlotRefs};
use plap::report::run;
use plap::shooting::closed_p2_1d;
use plap::solver::{first_eigenpair, solve_lane_emden, torsion, SolverConfig};
use plap::{asymptotics, PlapError};

#[derive(Parser)]
#[command(name = "plap", version, about = "p-Laplacian Lane-Emden solvers, eigenpairs and q->p asymptotics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the Lane-Emden problem on the interval (0,1).
    Solve {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        q: f64,
        /// Positive number or `resonant`.
        #[arg(long, default_value = "resonant")]
        lambda: String,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value = "plap-out")]
        out: PathBuf,
    },
    /// First eigenpair, torsion function, theta and the q-derivative of
    /// the Rayleigh minimum on the interval (0,1).
    Eigen {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value = "plap-out")]
        out: PathBuf,
    },
    /// q-sweep on the interval (0,1); writes the sweep CSV.
    Sweep {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "resonant")]
        lambda: String,
        /// Sweep values; may be passed multiple times. Defaults to the
        /// built-in grid.
        #[arg(long = "q")]
        q: Vec<f64>,
        /// Norm index for the mu column: a number >= 1 or `inf`.
        #[arg(long, default_value = "inf")]
        s: String,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value = "plap-out")]
        out: PathBuf,
    },
    /// Full experiment from a TOML config; exit 0 iff everything passed.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an SVG plot from a sweep CSV.
    Plot {
        /// Path to a CSV in the sweep schema.
        csv: PathBuf,
        /// One of supnorm_vs_q, lambda_vs_q, rate.
        kind: String,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Reference line for supnorm_vs_q.
        #[arg(long)]
        theta: Option<f64>,
        /// Reference line for lambda_vs_q.
        #[arg(long)]
        lambda_p: Option<f64>,
        #[arg(long, default_value = "plot.svg")]
        out: PathBuf,
    },
}

fn parse_lambda(text: &str) -> Result<LambdaSpec> {
    if text == "resonant" {
        return Ok(LambdaSpec::Resonant);
    }
    match text.parse::<f64>() {
        Ok(v) if v > 0.0 => Ok(LambdaSpec::Value(v)),
        _ => Err(PlapError::Config(format!(
            "lambda must be a positive number or `resonant`, got `{text}`"
        ))),
    }
}

fn parse_s(text: &str) -> Result<f64> {
    if text == "inf" {
        return Ok(f64::INFINITY);
    }
    match text.parse::<f64>() {
        Ok(v) if v >= 1.0 => Ok(v),
        _ => Err(PlapError::Config(format!("s must be a number >= 1 or `inf`, got `{text}`"))),
    }
}

fn resolve_lambda(spec: LambdaSpec, mesh: &std::sync::Arc<plap::mesh::Mesh>, p: f64, cfg: &SolverConfig) -> Result<f64> {
    Ok(match spec {
        LambdaSpec::Value(v) => v,
        LambdaSpec::Resonant => first_eigenpair(mesh, p, cfg)?.0,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    let cfg = SolverConfig::default();
    match cli.cmd {
        Cmd::Solve { p, q, lambda, n, out } => {
            let mesh = build_mesh(DomainSpec::interval(0.0, 1.0, n))?;
            let lam = resolve_lambda(parse_lambda(&lambda)?, &mesh, p, &cfg)?;
            let params = ExponentParams::new(p, q, lam, 1)?;
            let (u, report) = solve_lane_emden(&mesh, &params, &cfg)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join(format!("u_q{q}.csv"));
            std::fs::write(&path, u.to_csv())?;
            println!(
                "q = {q}, lambda = {lam}: sup = {}, residual = {:.3e}, iterations = {}, converged = {}",
                sup_norm(&u).0,
                report.residual,
                report.iterations,
                report.converged
            );
            println!("wrote {}", path.display());
            Ok(if report.converged { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Eigen { p, n, out } => {
            let mesh = build_mesh(DomainSpec::interval(0.0, 1.0, n))?;
            let (lambda_p, e_p, erep) = first_eigenpair(&mesh, p, &cfg)?;
            let (phi, trep) = torsion(&mesh, p, &cfg)?;
            let th = theta(&e_p, p)?;
            let d = asymptotics::lambda_derivative_closed(lambda_p, th.theta, lp_norm(&e_p, p)?)?;
            std::fs::create_dir_all(&out)?;
            std::fs::write(out.join("e_p.csv"), e_p.to_csv())?;
            std::fs::write(out.join("phi_p.csv"), phi.to_csv())?;
            println!("lambda_p = {lambda_p}");
            println!("theta_p = {}", th.theta);
            println!("d/dq lambda_q at q=p = {d}");
            println!("torsion sup = {}", sup_norm(&phi).0);
            if p == 2.0 {
                let c = closed_p2_1d();
                println!("closed forms at p=2: lambda = {}, theta = {}, derivative = {}", c.lambda, c.theta, c.derivative);
            }
            let ok = erep.converged && trep.converged;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Sweep { p, lambda, q, s, n, out } => {
            let mesh = build_mesh(DomainSpec::interval(0.0, 1.0, n))?;
            let lam = resolve_lambda(parse_lambda(&lambda)?, &mesh, p, &cfg)?;
            let s = parse_s(&s)?;
            let grid = if q.is_empty() { default_q_grid(p, 1) } else { q };
            let sweep = q_sweep(&mesh, p, lam, &grid, s, &cfg)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join("sweep.csv");
            std::fs::write(&path, sweep.to_csv())?;
            for r in &sweep.rows {
                println!(
                    "q = {}: sup = {}, mu = {}, lambda_q = {}, converged = {}",
                    r.q, r.sup_norm, r.mu, r.lambda_q, r.converged
                );
            }
            println!("wrote {}", path.display());
            let ok = sweep.rows.iter().all(|r| r.converged);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Verify { config, out } => {
            let (cfg_parsed, hash) = ExperimentConfig::from_file(&config)?;
            let manifest = run(&cfg_parsed, &hash, out.as_deref())?;
            let dir = out.unwrap_or_else(|| cfg_parsed.output_dir.clone());
            println!(
                "lambda_p = {}, theta = {}, derivative_closed = {}",
                manifest.eigen.lambda_p, manifest.eigen.theta, manifest.eigen.derivative_closed
            );
            if let Some(fd) = manifest.eigen.derivative_fd {
                println!("derivative_fd = {fd}");
            }
            for c in &manifest.checks {
                println!(
                    "check {}{}: lhs = {}, rhs = {}, {}",
                    c.name,
                    c.q.map(|q| format!(" (q = {q})")).unwrap_or_default(),
                    c.lhs,
                    c.rhs,
                    if c.satisfied { "pass" } else { "FAIL" }
                );
            }
            println!(
                "{} ({} files in {})",
                if manifest.passed { "PASSED" } else { "FAILED" },
                manifest.files.len(),
                dir.display()
            );
            Ok(if manifest.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Plot { csv, kind, p, theta, lambda_p, out } => {
            let text = std::fs::read_to_string(&csv)?;
            let sweep = plap::asymptotics::SweepResult::from_csv(&text, p, f64::INFINITY)?;
            let kind = PlotKind::parse(&kind)?;
            let svg = plot_sweep(&sweep, kind, &PlotRefs { theta, lambda_p })?;
            std::fs::write(&out, svg)?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
