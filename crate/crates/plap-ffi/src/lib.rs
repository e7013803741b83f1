//! C ABI for the plap solver library: opaque handles, status codes, and
//! plain-C entry points for meshes, solves and eigenpair extraction. The
//! header `include/plap.h` is generated by cbindgen at build time.
//!
//! Conventions:
//! * every fallible call returns a [`PlapStatus`] and writes results
//!   through out-pointers, which are left untouched on failure;
//! * handles are created and destroyed by this library only
//!   (`plap_*_free` is safe on null);
//! * `s = INFINITY` (C `HUGE_VAL`) selects the sup norm where a norm
//!   index is taken.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use plap::asymptotics;
use plap::mesh::{build_mesh, lp_norm, sup_norm, DomainSpec, GridFunction, Mesh};
use plap::operator::ExponentParams;
use plap::solver::{
    eigen_extract, first_eigenpair, solve_lane_emden, torsion, SolveReport, SolverConfig,
};
use plap::PlapError;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlapStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Arguments violate a precondition (bad exponents, domain, norm index).
    InvalidArgument = 2,
    /// The solver returned without meeting its tolerance.
    NoConvergence = 3,
    /// q = p was passed where the Lane-Emden solver expects q != p.
    ResonantExponent = 4,
    /// A caller-supplied buffer is too small.
    BufferTooSmall = 5,
    /// Internal panic; state is unchanged.
    Internal = 6,
}

fn status_of(err: &PlapError) -> PlapStatus {
    match err {
        PlapError::ResonantExponent => PlapStatus::ResonantExponent,
        _ => PlapStatus::InvalidArgument,
    }
}

/// Opaque mesh handle.
pub struct PlapMesh {
    mesh: Arc<Mesh>,
}

/// Opaque solution handle: a nodal field plus its convergence report.
pub struct PlapSolution {
    u: GridFunction,
    report: SolveReport,
}

fn guard<F: FnOnce() -> PlapStatus>(f: F) -> PlapStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => PlapStatus::Internal,
    }
}

unsafe fn write_mesh(out: *mut *mut PlapMesh, spec: DomainSpec) -> PlapStatus {
    if out.is_null() {
        return PlapStatus::NullArgument;
    }
    match build_mesh(spec) {
        Ok(mesh) => {
            *out = Box::into_raw(Box::new(PlapMesh { mesh }));
            PlapStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Uniform mesh of the interval (a, b) with n nodes.
#[no_mangle]
pub unsafe extern "C" fn plap_mesh_interval(
    a: f64,
    b: f64,
    n: usize,
    out: *mut *mut PlapMesh,
) -> PlapStatus {
    guard(|| write_mesh(out, DomainSpec::interval(a, b, n)))
}

/// Tensor mesh of the rectangle (0,lx) x (0,ly) with n nodes per axis.
#[no_mangle]
pub unsafe extern "C" fn plap_mesh_rectangle(
    lx: f64,
    ly: f64,
    n: usize,
    out: *mut *mut PlapMesh,
) -> PlapStatus {
    guard(|| write_mesh(out, DomainSpec::rectangle(lx, ly, n)))
}

/// Radial mesh of the N-ball of the given radius (dim in {1,2,3}).
#[no_mangle]
pub unsafe extern "C" fn plap_mesh_ball(
    radius: f64,
    dim: u32,
    n: usize,
    out: *mut *mut PlapMesh,
) -> PlapStatus {
    guard(|| write_mesh(out, DomainSpec::ball(radius, dim, n)))
}

/// Destroy a mesh handle; safe on null.
#[no_mangle]
pub unsafe extern "C" fn plap_mesh_free(mesh: *mut PlapMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Number of nodes (and the length of solution value buffers).
#[no_mangle]
pub unsafe extern "C" fn plap_mesh_node_count(mesh: *const PlapMesh) -> usize {
    if mesh.is_null() {
        return 0;
    }
    (*mesh).mesh.node_count()
}

/// Write the node coordinates into `xs`/`ys` (each of length `len`).
/// `ys` may be null for 1D and radial meshes.
#[no_mangle]
pub unsafe extern "C" fn plap_mesh_coords(
    mesh: *const PlapMesh,
    xs: *mut f64,
    ys: *mut f64,
    len: usize,
) -> PlapStatus {
    guard(|| {
        if mesh.is_null() || xs.is_null() {
            return PlapStatus::NullArgument;
        }
        let m = &(*mesh).mesh;
        if len < m.node_count() {
            return PlapStatus::BufferTooSmall;
        }
        for i in 0..m.node_count() {
            let [x, y] = m.coords(i);
            *xs.add(i) = x;
            if !ys.is_null() {
                *ys.add(i) = y;
            }
        }
        PlapStatus::Ok
    })
}

fn config(tol: f64, max_iter: usize) -> SolverConfig {
    let mut cfg = SolverConfig::default();
    if tol > 0.0 {
        cfg.tol = tol;
    }
    if max_iter > 0 {
        cfg.max_iter = max_iter;
    }
    cfg
}

unsafe fn emit_solution(
    out: *mut *mut PlapSolution,
    u: GridFunction,
    report: SolveReport,
) -> PlapStatus {
    let converged = report.converged;
    *out = Box::into_raw(Box::new(PlapSolution { u, report }));
    if converged {
        PlapStatus::Ok
    } else {
        PlapStatus::NoConvergence
    }
}

/// First eigenpair: writes `lambda_out` and a sup-normalized eigenfunction
/// handle. Pass `tol <= 0` / `max_iter == 0` for the defaults (1e-9, 10000).
/// Returns `NoConvergence` with the handle still written when the solver
/// stopped short of the tolerance.
#[no_mangle]
pub unsafe extern "C" fn plap_first_eigenpair(
    mesh: *const PlapMesh,
    p: f64,
    tol: f64,
    max_iter: usize,
    lambda_out: *mut f64,
    out: *mut *mut PlapSolution,
) -> PlapStatus {
    guard(|| {
        if mesh.is_null() || lambda_out.is_null() || out.is_null() {
            return PlapStatus::NullArgument;
        }
        match first_eigenpair(&(*mesh).mesh, p, &config(tol, max_iter)) {
            Ok((lambda, e, report)) => {
                *lambda_out = lambda;
                emit_solution(out, e, report)
            }
            Err(e) => status_of(&e),
        }
    })
}

/// The p-torsion function of the mesh.
#[no_mangle]
pub unsafe extern "C" fn plap_torsion(
    mesh: *const PlapMesh,
    p: f64,
    tol: f64,
    max_iter: usize,
    out: *mut *mut PlapSolution,
) -> PlapStatus {
    guard(|| {
        if mesh.is_null() || out.is_null() {
            return PlapStatus::NullArgument;
        }
        match torsion(&(*mesh).mesh, p, &config(tol, max_iter)) {
            Ok((u, report)) => emit_solution(out, u, report),
            Err(e) => status_of(&e),
        }
    })
}

/// Positive Lane-Emden solution for q != p (sub- or super-linear regime).
#[no_mangle]
pub unsafe extern "C" fn plap_solve_lane_emden(
    mesh: *const PlapMesh,
    p: f64,
    q: f64,
    lambda: f64,
    tol: f64,
    max_iter: usize,
    out: *mut *mut PlapSolution,
) -> PlapStatus {
    guard(|| {
        if mesh.is_null() || out.is_null() {
            return PlapStatus::NullArgument;
        }
        let m = &(*mesh).mesh;
        if q == p {
            return PlapStatus::ResonantExponent;
        }
        let params = match ExponentParams::new(p, q, lambda, m.spec().dimension()) {
            Ok(pr) => pr,
            Err(e) => return status_of(&e),
        };
        match solve_lane_emden(m, &params, &config(tol, max_iter)) {
            Ok((u, report)) => emit_solution(out, u, report),
            Err(e) => status_of(&e),
        }
    })
}

/// Destroy a solution handle; safe on null.
#[no_mangle]
pub unsafe extern "C" fn plap_solution_free(solution: *mut PlapSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Copy the nodal values into `buf` (length `len >= node count`).
#[no_mangle]
pub unsafe extern "C" fn plap_solution_values(
    solution: *const PlapSolution,
    buf: *mut f64,
    len: usize,
) -> PlapStatus {
    guard(|| {
        if solution.is_null() || buf.is_null() {
            return PlapStatus::NullArgument;
        }
        let vals = (*solution).u.values();
        if len < vals.len() {
            return PlapStatus::BufferTooSmall;
        }
        std::ptr::copy_nonoverlapping(vals.as_ptr(), buf, vals.len());
        PlapStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn plap_solution_len(solution: *const PlapSolution) -> usize {
    if solution.is_null() {
        return 0;
    }
    (*solution).u.values().len()
}

/// `||u||_s` with `s >= 1`, or INFINITY for the sup norm; writes `norm_out`.
#[no_mangle]
pub unsafe extern "C" fn plap_solution_norm(
    solution: *const PlapSolution,
    s: f64,
    norm_out: *mut f64,
) -> PlapStatus {
    guard(|| {
        if solution.is_null() || norm_out.is_null() {
            return PlapStatus::NullArgument;
        }
        let u = &(*solution).u;
        let norm = if s == f64::INFINITY {
            sup_norm(u).0
        } else {
            match lp_norm(u, s) {
                Ok(v) => v,
                Err(e) => return status_of(&e),
            }
        };
        *norm_out = norm;
        PlapStatus::Ok
    })
}

/// Final relative residual of the solve that produced this handle.
#[no_mangle]
pub unsafe extern "C" fn plap_solution_residual(solution: *const PlapSolution) -> f64 {
    if solution.is_null() {
        return f64::NAN;
    }
    (*solution).report.residual
}

#[no_mangle]
pub unsafe extern "C" fn plap_solution_iterations(solution: *const PlapSolution) -> usize {
    if solution.is_null() {
        return 0;
    }
    (*solution).report.iterations
}

/// 1 if the solve met its tolerance, 0 otherwise.
#[no_mangle]
pub unsafe extern "C" fn plap_solution_converged(solution: *const PlapSolution) -> i32 {
    if solution.is_null() {
        return 0;
    }
    (*solution).report.converged as i32
}

/// Eigenvalue estimate `mu = lambda ||u||_s^{q-p}` extracted from a
/// Lane-Emden solution (`s = INFINITY` for the sup norm).
#[no_mangle]
pub unsafe extern "C" fn plap_eigen_extract(
    solution: *const PlapSolution,
    lambda: f64,
    p: f64,
    q: f64,
    s: f64,
    mu_out: *mut f64,
) -> PlapStatus {
    guard(|| {
        if solution.is_null() || mu_out.is_null() {
            return PlapStatus::NullArgument;
        }
        match eigen_extract(&(*solution).u, lambda, p, q, s) {
            Ok(est) => {
                *mu_out = est.mu;
                PlapStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// `theta_p` computed from a (sup-normalized) eigenfunction handle.
#[no_mangle]
pub unsafe extern "C" fn plap_theta(
    solution: *const PlapSolution,
    p: f64,
    theta_out: *mut f64,
) -> PlapStatus {
    guard(|| {
        if solution.is_null() || theta_out.is_null() {
            return PlapStatus::NullArgument;
        }
        match asymptotics::theta(&(*solution).u, p) {
            Ok(t) => {
                *theta_out = t.theta;
                PlapStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Embedding constants: writes `C_{N,p}`, `K_{N,p}` and `omega_N`.
#[no_mangle]
pub unsafe extern "C" fn plap_constants(
    dim: u32,
    p: f64,
    c_out: *mut f64,
    k_out: *mut f64,
    omega_out: *mut f64,
) -> PlapStatus {
    guard(|| {
        if c_out.is_null() || k_out.is_null() || omega_out.is_null() {
            return PlapStatus::NullArgument;
        }
        match asymptotics::constants(dim, p) {
            Ok((c, k, omega)) => {
                *c_out = c;
                *k_out = k;
                *omega_out = omega;
                PlapStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Closed-form torsion value of the N-ball at radius r.
#[no_mangle]
pub unsafe extern "C" fn plap_ball_torsion_closed(
    radius: f64,
    dim: u32,
    p: f64,
    r: f64,
    value_out: *mut f64,
) -> PlapStatus {
    guard(|| {
        if value_out.is_null() {
            return PlapStatus::NullArgument;
        }
        match asymptotics::ball_torsion_closed(radius, dim, p, r) {
            Ok(v) => {
                *value_out = v;
                PlapStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn plap_status_message(status: PlapStatus) -> *const std::os::raw::c_char {
    let msg: &'static [u8] = match status {
        PlapStatus::Ok => b"ok\0",
        PlapStatus::NullArgument => b"null pointer argument\0",
        PlapStatus::InvalidArgument => b"invalid argument\0",
        PlapStatus::NoConvergence => b"solver did not reach its tolerance\0",
        PlapStatus::ResonantExponent => {
            b"q = p is the eigenvalue problem; use plap_first_eigenpair\0"
        }
        PlapStatus::BufferTooSmall => b"buffer too small\0",
        PlapStatus::Internal => b"internal error\0",
    };
    msg.as_ptr() as *const std::os::raw::c_char
}
