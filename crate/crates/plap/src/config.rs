//! Experiment configuration: a TOML file describing the domain, exponents,
//! q-grid, solver knobs, output directory and enabled checks.
//!
//! ```toml
//! p = 2.0
//! lambda = "resonant"          # or a positive number
//! q_grid = [1.9, 1.95, 2.05]   # optional; defaults to the built-in grid
//! s = "inf"                    # norm index for mu (number >= 1 or "inf")
//! checks = ["bounds", "linfty"]
//!
//! [domain]
//! kind = "interval"            # interval | rectangle | ball
//! a = 0.0
//! b = 1.0
//! n = 1024
//!
//! [solver]
//! tol = 1e-9
//! max_iter = 10000
//! eps_reg = 1e-10
//!
//! [output]
//! dir = "plap-out"
//! ```

use std::path::PathBuf;

use serde::Deserialize;

use crate::asymptotics::default_q_grid;
use crate::error::{PlapError, Result};
use crate::mesh::DomainSpec;
use crate::solver::SolverConfig;

/// Which check families gate the run's exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Bounds,
    Linfty,
}

/// Lambda may be a number or the token `resonant` (the discrete first
/// eigenvalue of the run's mesh).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaSpec {
    Resonant,
    Value(f64),
}

/// Validated experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub p: f64,
    pub lambda: LambdaSpec,
    pub q_grid: Vec<f64>,
    /// Norm index for eigen extraction; `f64::INFINITY` = sup norm.
    pub s: f64,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    pub checks: Vec<CheckKind>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: f64,
    lambda: Option<toml::Value>,
    q_grid: Option<Vec<f64>>,
    s: Option<toml::Value>,
    checks: Option<Vec<String>>,
    domain: RawDomain,
    solver: Option<RawSolver>,
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDomain {
    kind: String,
    n: usize,
    a: Option<f64>,
    b: Option<f64>,
    lx: Option<f64>,
    ly: Option<f64>,
    radius: Option<f64>,
    dim: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    tol: Option<f64>,
    max_iter: Option<usize>,
    eps_reg: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

fn cfg_err(msg: impl Into<String>) -> PlapError {
    PlapError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| cfg_err(e.to_string()))?;

        let domain = match raw.domain.kind.as_str() {
            "interval" => DomainSpec::interval(
                raw.domain.a.unwrap_or(0.0),
                raw.domain.b.unwrap_or(1.0),
                raw.domain.n,
            ),
            "rectangle" => DomainSpec::rectangle(
                raw.domain.lx.unwrap_or(1.0),
                raw.domain.ly.unwrap_or(1.0),
                raw.domain.n,
            ),
            "ball" => DomainSpec::ball(
                raw.domain.radius.unwrap_or(1.0),
                raw.domain.dim.unwrap_or(2),
                raw.domain.n,
            ),
            other => return Err(cfg_err(format!("unknown domain kind `{other}`"))),
        };
        domain.validate()?;

        if !(raw.p > 1.0) {
            return Err(cfg_err(format!("p must exceed 1, got {}", raw.p)));
        }

        let lambda = match raw.lambda {
            None => LambdaSpec::Resonant,
            Some(toml::Value::String(s)) if s == "resonant" => LambdaSpec::Resonant,
            Some(toml::Value::Float(v)) if v > 0.0 => LambdaSpec::Value(v),
            Some(toml::Value::Integer(v)) if v > 0 => LambdaSpec::Value(v as f64),
            Some(other) => {
                return Err(cfg_err(format!(
                    "lambda must be a positive number or \"resonant\", got {other}"
                )))
            }
        };

        let s = match raw.s {
            None => f64::INFINITY,
            Some(toml::Value::String(v)) if v == "inf" => f64::INFINITY,
            Some(toml::Value::Float(v)) if v >= 1.0 => v,
            Some(toml::Value::Integer(v)) if v >= 1 => v as f64,
            Some(other) => {
                return Err(cfg_err(format!("s must be a number >= 1 or \"inf\", got {other}")))
            }
        };

        let q_grid = match raw.q_grid {
            Some(g) => g,
            None => default_q_grid(raw.p, domain.dimension()),
        };
        if q_grid.is_empty() {
            return Err(cfg_err("q_grid must not be empty"));
        }
        if q_grid.iter().any(|&q| q == raw.p) {
            return Err(cfg_err("q_grid must exclude p"));
        }

        let mut solver = SolverConfig::default();
        if let Some(rs) = raw.solver {
            if let Some(tol) = rs.tol {
                solver.tol = tol;
            }
            if let Some(mi) = rs.max_iter {
                solver.max_iter = mi;
            }
            if let Some(eps) = rs.eps_reg {
                solver.eps_reg = eps;
            }
        }
        solver.validate()?;

        let checks = match raw.checks {
            None => vec![CheckKind::Bounds, CheckKind::Linfty],
            Some(names) => {
                let mut out = Vec::new();
                for name in names {
                    match name.as_str() {
                        "bounds" => out.push(CheckKind::Bounds),
                        "linfty" => out.push(CheckKind::Linfty),
                        other => return Err(cfg_err(format!("unknown check `{other}`"))),
                    }
                }
                out
            }
        };

        let output_dir =
            PathBuf::from(raw.output.and_then(|o| o.dir).unwrap_or_else(|| "plap-out".into()));

        Ok(Self { domain, p: raw.p, lambda, q_grid, s, solver, output_dir, checks })
    }

    pub fn from_file(path: &std::path::Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)?;
        let cfg = Self::from_toml_str(&text)?;
        Ok((cfg, fnv1a_hex(text.as_bytes())))
    }
}

/// FNV-1a 64-bit hash, hex encoded; fingerprints the raw config text.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
p = 2.0
lambda = "resonant"
q_grid = [1.9, 1.95, 2.05, 2.1]
s = "inf"

[domain]
kind = "interval"
n = 64

[solver]
tol = 1e-8
"#;

    #[test]
    fn parses_base_config() {
        let cfg = ExperimentConfig::from_toml_str(BASE).unwrap();
        assert_eq!(cfg.p, 2.0);
        assert_eq!(cfg.lambda, LambdaSpec::Resonant);
        assert_eq!(cfg.q_grid, vec![1.9, 1.95, 2.05, 2.1]);
        assert_eq!(cfg.s, f64::INFINITY);
        assert_eq!(cfg.solver.tol, 1e-8);
        assert_eq!(cfg.solver.max_iter, 10_000);
        assert_eq!(cfg.checks, vec![CheckKind::Bounds, CheckKind::Linfty]);
        assert_eq!(cfg.output_dir, PathBuf::from("plap-out"));
    }

    #[test]
    fn q_grid_must_exclude_p() {
        let text = BASE.replace("[1.9, 1.95, 2.05, 2.1]", "[1.9, 2.0]");
        match ExperimentConfig::from_toml_str(&text) {
            Err(PlapError::Config(msg)) => assert_eq!(msg, "q_grid must exclude p"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn numeric_lambda_and_s() {
        let text = BASE.replace("\"resonant\"", "2.5").replace("\"inf\"", "2");
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg.lambda, LambdaSpec::Value(2.5));
        assert_eq!(cfg.s, 2.0);
    }

    #[test]
    fn default_grid_when_missing() {
        let text = BASE.replace("q_grid = [1.9, 1.95, 2.05, 2.1]\n", "");
        let cfg = ExperimentConfig::from_toml_str(&text).unwrap();
        assert_eq!(cfg.q_grid, vec![1.8, 1.9, 1.95, 2.05, 2.1, 2.2]);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = format!("{BASE}\nbogus = 1\n");
        assert!(ExperimentConfig::from_toml_str(&text).is_err());
    }

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv1a_hex(b""), "cbf29ce484222325");
        assert_eq!(fnv1a_hex(b"plap"), fnv1a_hex(b"plap"));
        assert_ne!(fnv1a_hex(b"plap"), fnv1a_hex(b"palp"));
    }
}
