//! Discrete energy functionals, weak residuals and Rayleigh quotients for
//! the p-Laplacian with a power nonlinearity.
//!
//! The gradient term `integral |grad u|^p` is assembled from the cell-wise
//! constant gradients and is exact for the piecewise-linear ansatz. Every
//! nonlinear zero-order term (`|u|^q`, `|u|^{q-2} u`) is evaluated at the
//! cell average of `u` (midpoint rule): second-order consistent, cheap and
//! sign-preserving. The weak residual below is, by construction, the exact
//! nodal gradient of the discrete energy, which the finite-difference
//! property tests rely on.

use crate::error::{PlapError, Result};
use crate::mesh::GridFunction;

/// Problem exponents (p, q), the parameter lambda, the dimension and the
/// gradient-singularity smoothing used inside `|grad u|^{p-2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentParams {
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
    pub dim: u32,
    pub eps_reg: f64,
}

impl ExponentParams {
    /// Validates `p > 1`, `1 <= q < p*` and `lambda > 0`.
    pub fn new(p: f64, q: f64, lambda: f64, dim: u32) -> Result<Self> {
        let params = Self { p, q, lambda, dim, eps_reg: 1e-10 };
        params.validate()?;
        Ok(params)
    }

    pub fn with_eps_reg(mut self, eps_reg: f64) -> Result<Self> {
        if !(0.0..=1e-6).contains(&eps_reg) {
            return Err(PlapError::InvalidParams(format!(
                "eps_reg must lie in [0, 1e-6], got {eps_reg}"
            )));
        }
        self.eps_reg = eps_reg;
        self.validate()?;
        Ok(self)
    }

    /// Sobolev critical exponent p* = Np/(N-p) for p < N, infinity otherwise.
    pub fn critical_exponent(&self) -> f64 {
        critical_exponent(self.p, self.dim)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(PlapError::InvalidParams(format!("p must satisfy p > 1, got {}", self.p)));
        }
        if !(self.q >= 1.0) || !self.q.is_finite() {
            return Err(PlapError::InvalidParams(format!("q must satisfy q >= 1, got {}", self.q)));
        }
        let pstar = self.critical_exponent();
        if self.q >= pstar {
            return Err(PlapError::InvalidParams(format!(
                "q = {} must stay below the critical exponent p* = {pstar}",
                self.q
            )));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return Err(PlapError::InvalidParams(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(0.0..=1e-6).contains(&self.eps_reg) {
            return Err(PlapError::InvalidParams(format!(
                "eps_reg must lie in [0, 1e-6], got {}",
                self.eps_reg
            )));
        }
        Ok(())
    }
}

pub fn critical_exponent(p: f64, dim: u32) -> f64 {
    let n = dim as f64;
    if p < n {
        n * p / (n - p)
    } else {
        f64::INFINITY
    }
}

/// Energy value together with its two constituents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    /// J = gradient_term - source_term.
    pub j: f64,
    /// (1/p) integral |grad u|^p.
    pub gradient_term: f64,
    /// (lambda/q) integral |u|^q.
    pub source_term: f64,
}

/// |t|^q with fast paths for q = 1, 2.
#[inline]
pub(crate) fn abs_pow(t: f64, q: f64) -> f64 {
    if q == 2.0 {
        t * t
    } else if q == 1.0 {
        t.abs()
    } else {
        t.abs().powf(q)
    }
}

/// |t|^{q-2} t, continuously extended by 0 at t = 0 (sign(t) for q = 1).
#[inline]
pub(crate) fn signed_pow(t: f64, q: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else if q == 2.0 {
        t
    } else if q == 1.0 {
        t.signum()
    } else {
        t.abs().powf(q - 2.0) * t
    }
}

/// `integral |grad u|^p` and the vector `K_i = integral |grad u|^{p-2}
/// grad u . grad phi_i` (regularized modulus inside the p-2 power only).
pub(crate) fn grad_form(u: &GridFunction, p: f64, eps_reg: f64) -> (f64, Vec<f64>) {
    let mesh = u.mesh();
    let mut value = 0.0;
    let mut k = vec![0.0; mesh.node_count()];
    let e2 = eps_reg * eps_reg;
    mesh.for_each_cell(u.values(), |w, g, _, nodes, coeffs, nn| {
        let g2 = g[0] * g[0] + g[1] * g[1];
        value += w * if p == 2.0 { g2 } else { g2.sqrt().powf(p) };
        let weight = if p == 2.0 { 1.0 } else { (g2 + e2).powf(0.5 * (p - 2.0)) };
        for t in 0..nn {
            k[nodes[t]] += w * weight * (g[0] * coeffs[t][0] + g[1] * coeffs[t][1]);
        }
    });
    (value, k)
}

/// `integral |u|^q` and the vector `S_i = integral |u|^{q-2} u phi_i`,
/// both with the cell-average evaluation of the integrand.
pub(crate) fn source_form(u: &GridFunction, q: f64) -> (f64, Vec<f64>) {
    let mesh = u.mesh();
    let mut value = 0.0;
    let mut s = vec![0.0; mesh.node_count()];
    mesh.for_each_cell(u.values(), |w, _, avg, nodes, _, nn| {
        value += w * abs_pow(avg, q);
        let v = signed_pow(avg, q) / nn as f64;
        for t in 0..nn {
            s[nodes[t]] += w * v;
        }
    });
    (value, s)
}

/// `integral |u|^q` with the operator quadrature (cell averages). This is
/// the integral the Rayleigh quotient and the Nehari identity use; it
/// differs from `lp_norm(u, q)^q` (node weights) at the quadrature level.
pub fn source_integral(u: &GridFunction, q: f64) -> f64 {
    let mut value = 0.0;
    u.mesh().for_each_cell(u.values(), |w, _, avg, _, _, _| {
        value += w * abs_pow(avg, q);
    });
    value
}

/// `J_{lambda,q}(u) = (1/p) integral |grad u|^p - (lambda/q) integral |u|^q`.
pub fn energy(u: &GridFunction, params: &ExponentParams) -> Result<EnergyReport> {
    params.validate()?;
    let (a, _) = grad_form(u, params.p, 0.0);
    let b = source_integral(u, params.q);
    let gradient_term = a / params.p;
    let source_term = params.lambda * b / params.q;
    Ok(EnergyReport { j: gradient_term - source_term, gradient_term, source_term })
}

/// Energy value without assembling the residual (used by line searches).
pub(crate) fn energy_value(u: &GridFunction, params: &ExponentParams) -> f64 {
    let mesh = u.mesh();
    let mut a = 0.0;
    let mut b = 0.0;
    let (p, q) = (params.p, params.q);
    mesh.for_each_cell(u.values(), |w, g, avg, _, _, _| {
        let g2 = g[0] * g[0] + g[1] * g[1];
        a += w * if p == 2.0 { g2 } else { g2.sqrt().powf(p) };
        b += w * abs_pow(avg, q);
    });
    a / p - params.lambda * b / q
}

/// Weak residual of the Lane-Emden equation: nodal vector
/// `r_i = integral |grad u|^{p-2} grad u . grad phi_i
///        - lambda integral |u|^{q-2} u phi_i`,
/// zero at boundary indices.
pub fn weak_residual(u: &GridFunction, params: &ExponentParams) -> Result<GridFunction> {
    params.validate()?;
    let (_, k) = grad_form(u, params.p, params.eps_reg);
    let (_, s) = source_form(u, params.q);
    let mesh = u.mesh();
    let mut r: Vec<f64> = k
        .iter()
        .zip(&s)
        .map(|(ki, si)| ki - params.lambda * si)
        .collect();
    for i in 0..r.len() {
        if mesh.is_boundary(i) {
            r[i] = 0.0;
        }
    }
    GridFunction::new(mesh.clone(), r)
}

/// Rayleigh quotient `R_q(u) = integral |grad u|^p / (integral |u|^q)^{p/q}`.
pub fn rayleigh(u: &GridFunction, p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(PlapError::InvalidParams(format!("rayleigh needs p > 1, got {p}")));
    }
    if !(q >= 1.0) {
        return Err(PlapError::InvalidParams(format!("rayleigh needs q >= 1, got {q}")));
    }
    let (a, _) = grad_form(u, p, 0.0);
    let b = source_integral(u, q);
    if b == 0.0 {
        return Err(PlapError::ZeroFunction);
    }
    Ok(if p == q { a / b } else { a / b.powf(p / q) })
}

/// Nehari gap `integral |grad u|^p - lambda integral |u|^q`; vanishes at
/// discrete weak solutions (test function phi = u).
pub fn nehari_gap(u: &GridFunction, params: &ExponentParams) -> f64 {
    let (a, _) = grad_form(u, params.p, 0.0);
    a - params.lambda * source_integral(u, params.q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{build_mesh, DomainSpec, GridFunction};
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn mesh1d(n: usize) -> Arc<crate::mesh::Mesh> {
        build_mesh(DomainSpec::interval(0.0, 1.0, n)).unwrap()
    }

    fn sin_field(mesh: &Arc<crate::mesh::Mesh>) -> GridFunction {
        GridFunction::from_fn(mesh.clone(), |x, _| (PI * x).sin())
    }

    #[test]
    fn params_validation() {
        assert!(ExponentParams::new(2.0, 1.5, 1.0, 1).is_ok());
        assert!(ExponentParams::new(1.0, 1.5, 1.0, 1).is_err());
        assert!(ExponentParams::new(2.0, 0.5, 1.0, 1).is_err());
        assert!(ExponentParams::new(2.0, 2.0, -1.0, 1).is_err());
        // N = 3, p = 2 has p* = 6
        assert!(ExponentParams::new(2.0, 5.9, 1.0, 3).is_ok());
        assert!(ExponentParams::new(2.0, 6.0, 1.0, 3).is_err());
        assert!(ExponentParams::new(2.0, 2.0, 1.0, 1).unwrap().with_eps_reg(1e-3).is_err());
    }

    #[test]
    fn energy_examples() {
        let mesh = mesh1d(513);
        let zero = GridFunction::zeros(mesh.clone());
        let eigen = ExponentParams::new(2.0, 2.0, PI * PI, 1).unwrap();
        assert_eq!(energy(&zero, &eigen).unwrap().j, 0.0);

        let s = sin_field(&mesh);
        let rep = energy(&s, &eigen).unwrap();
        assert!(rep.j.abs() < 1e-4, "J = {}", rep.j);
        assert_eq!(rep.j, rep.gradient_term - rep.source_term);

        let torsion = ExponentParams::new(2.0, 1.0, 1.0, 1).unwrap();
        let par = GridFunction::from_fn(mesh, |x, _| 0.5 * x * (1.0 - x));
        let rep = energy(&par, &torsion).unwrap();
        assert!((rep.j - (-1.0 / 24.0)).abs() < 1e-5, "J = {}", rep.j);
    }

    #[test]
    fn weak_residual_examples() {
        let mesh = mesh1d(513);
        let eigen = ExponentParams::new(2.0, 2.0, PI * PI, 1).unwrap().with_eps_reg(0.0).unwrap();
        let zero = GridFunction::zeros(mesh.clone());
        assert!(weak_residual(&zero, &eigen).unwrap().values().iter().all(|&v| v == 0.0));

        let s = sin_field(&mesh);
        let r = weak_residual(&s, &eigen).unwrap();
        let max = r.values().iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        assert!(max < 1e-6, "max residual {max}");

        // the discrete torsion equation is satisfied exactly by the parabola
        let torsion = ExponentParams::new(2.0, 1.0, 1.0, 1).unwrap();
        let par = GridFunction::from_fn(mesh, |x, _| 0.5 * x * (1.0 - x));
        let r = weak_residual(&par, &torsion).unwrap();
        let max = r.values().iter().fold(0.0_f64, |m, &v| m.max(v.abs()));
        assert!(max < 1e-12, "max residual {max}");
    }

    #[test]
    fn residual_is_zero_on_boundary() {
        let mesh = build_mesh(DomainSpec::rectangle(1.0, 1.0, 9)).unwrap();
        let u = GridFunction::from_fn(mesh.clone(), |x, y| x * y + 1.0); // non-Dirichlet
        let params = ExponentParams::new(2.0, 2.0, 1.0, 2).unwrap();
        let r = weak_residual(&u, &params).unwrap();
        for i in 0..mesh.node_count() {
            if mesh.is_boundary(i) {
                assert_eq!(r.values()[i], 0.0);
            }
        }
    }

    #[test]
    fn rayleigh_examples() {
        let mesh = mesh1d(513);
        let s = sin_field(&mesh);
        let mut s2 = s.clone();
        s2.scale(2.0);
        assert_eq!(rayleigh(&s, 2.0, 2.0).unwrap(), rayleigh(&s2, 2.0, 2.0).unwrap());

        assert!((rayleigh(&s, 2.0, 2.0).unwrap() - PI * PI).abs() < 1e-3);

        let par = GridFunction::from_fn(mesh.clone(), |x, _| x * (1.0 - x));
        assert!((rayleigh(&par, 2.0, 1.0).unwrap() - 12.0).abs() < 1e-3);

        let zero = GridFunction::zeros(mesh);
        assert!(matches!(rayleigh(&zero, 2.0, 2.0), Err(PlapError::ZeroFunction)));
    }

    #[test]
    fn rayleigh_zero_homogeneity_general_exponents() {
        let mesh = mesh1d(129);
        let u = GridFunction::from_fn(mesh, |x, _| x * (1.0 - x) * (2.0 + (3.0 * x).cos()));
        let r1 = rayleigh(&u, 2.5, 1.7).unwrap();
        let mut v = u.clone();
        v.scale(2.0);
        let r2 = rayleigh(&v, 2.5, 1.7).unwrap();
        assert!((r1 - r2).abs() < 1e-12 * r1);
    }

    #[test]
    fn nehari_examples() {
        let mesh = mesh1d(513);
        let zero = GridFunction::zeros(mesh.clone());
        let eigen = ExponentParams::new(2.0, 2.0, PI * PI, 1).unwrap();
        assert_eq!(nehari_gap(&zero, &eigen), 0.0);

        let s = sin_field(&mesh);
        assert!(nehari_gap(&s, &eigen).abs() < 1e-3);

        let par = GridFunction::from_fn(mesh, |x, _| x * (1.0 - x));
        let p21 = ExponentParams::new(2.0, 2.0, 1.0, 1).unwrap();
        assert!((nehari_gap(&par, &p21) - 0.3).abs() < 1e-3);
    }

    #[test]
    fn energy_scaling_when_p_equals_q() {
        let mesh = mesh1d(257);
        let u = GridFunction::from_fn(mesh, |x, _| x * (1.0 - x) * (1.0 + x));
        for p in [1.5, 2.0, 2.6] {
            let params = ExponentParams::new(p, p, 3.0, 1).unwrap();
            let j = energy(&u, &params).unwrap().j;
            let mut v = u.clone();
            let c = 1.7;
            v.scale(c);
            let jc = energy(&v, &params).unwrap().j;
            assert!((jc - c.powf(p) * j).abs() <= 1e-10 * jc.abs().max(j.abs()));
        }
    }

    #[test]
    fn residual_matches_directional_derivative() {
        use rand::{Rng, SeedableRng};
        let mesh = mesh1d(65);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for &(p, q) in &[(2.0, 1.3), (2.0, 2.0), (3.0, 2.7), (1.7, 1.3)] {
            let params = ExponentParams::new(p, q, 2.0, 1).unwrap();
            for _ in 0..5 {
                let mut u = GridFunction::from_fn(mesh.clone(), |_, _| rng.gen_range(0.2..1.0));
                u.zero_boundary();
                let mut v = GridFunction::from_fn(mesh.clone(), |_, _| rng.gen_range(-1.0..1.0));
                v.zero_boundary();
                let r = weak_residual(&u, &params).unwrap();
                let rv: f64 = r.values().iter().zip(v.values()).map(|(a, b)| a * b).sum();
                let t = 1e-6;
                let mut up = u.clone();
                let mut um = u.clone();
                for i in 0..up.values().len() {
                    up.values_mut()[i] += t * v.values()[i];
                    um.values_mut()[i] -= t * v.values()[i];
                }
                let fd = (energy_value(&up, &params) - energy_value(&um, &params)) / (2.0 * t);
                assert!(
                    (fd - rv).abs() <= 1e-4 * rv.abs().max(1e-8),
                    "p={p} q={q}: fd={fd} rv={rv}"
                );
            }
        }
    }
}

