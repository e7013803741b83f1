//! Solvers and verification tools for the Lane-Emden problem of the
//! p-Laplacian, `-div(|grad u|^{p-2} grad u) = lambda |u|^{q-2} u` with
//! homogeneous Dirichlet data on model domains.
//!
//! The crate computes positive solutions in the sub- and super-linear
//! regimes, first eigenpairs by Rayleigh-quotient minimization, the
//! amplitude `theta_p` of the `q -> p` limit, eigenpair approximations
//! extracted from non-resonant solves, and machine-checks the explicit
//! sup-norm and eigenvalue bounds these solutions satisfy. An
//! independent 1D shooting oracle cross-validates the mesh solvers.
//!
//! ```
//! use plap::mesh::{build_mesh, DomainSpec};
//! use plap::solver::{first_eigenpair, SolverConfig};
//! use plap::asymptotics::theta;
//!
//! let mesh = build_mesh(DomainSpec::interval(0.0, 1.0, 257)).unwrap();
//! let (lambda_p, e_p, report) = first_eigenpair(&mesh, 2.0, &SolverConfig::default()).unwrap();
//! assert!(report.converged);
//! assert!((lambda_p - std::f64::consts::PI.powi(2)).abs() < 1e-3);
//! assert!((theta(&e_p, 2.0).unwrap().theta - 1.2130613).abs() < 1e-3);
//! ```

pub mod asymptotics;
pub mod config;
pub mod error;
pub mod mesh;
pub mod operator;
pub mod plot;
pub mod report;
pub mod shooting;
pub mod solver;

pub use error::{PlapError, Result};
