//! Model domains, their discretizations, nodal fields and norms.
//!
//! Three domain kinds are supported:
//!
//! * `Interval (a,b)` — uniform grid, piecewise-linear fields, trapezoid
//!   node weights;
//! * `Rectangle Lx x Ly` — structured triangulation (each grid cell split
//!   along the same diagonal), lumped P1 node weights;
//! * `RadialBall R, N in {1,2,3}` — 1D radial grid with the surface factor
//!   and the `r^(N-1)` weight folded into cell/node weights.
//!
//! Gradients of nodal data are cell-wise constant (exact for the
//! piecewise-linear ansatz). Node weights integrate piecewise-linear data;
//! the nonlinear energy integrands live in [`crate::operator`] and use
//! cell-midpoint quadrature instead.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{PlapError, Result};

/// Geometry of a model domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    Interval { a: f64, b: f64 },
    Rectangle { lx: f64, ly: f64 },
    RadialBall { radius: f64, dim: u32 },
}

/// A domain together with its resolution (nodes per axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub resolution: usize,
}

impl DomainSpec {
    pub fn interval(a: f64, b: f64, n: usize) -> Self {
        Self { kind: DomainKind::Interval { a, b }, resolution: n }
    }

    pub fn rectangle(lx: f64, ly: f64, n: usize) -> Self {
        Self { kind: DomainKind::Rectangle { lx, ly }, resolution: n }
    }

    pub fn ball(radius: f64, dim: u32, n: usize) -> Self {
        Self { kind: DomainKind::RadialBall { radius, dim }, resolution: n }
    }

    /// Spatial dimension N.
    pub fn dimension(&self) -> u32 {
        match self.kind {
            DomainKind::Interval { .. } => 1,
            DomainKind::Rectangle { .. } => 2,
            DomainKind::RadialBall { dim, .. } => dim,
        }
    }

    /// Lebesgue measure |Omega| in closed form.
    pub fn measure(&self) -> f64 {
        match self.kind {
            DomainKind::Interval { a, b } => b - a,
            DomainKind::Rectangle { lx, ly } => lx * ly,
            DomainKind::RadialBall { radius, dim } => {
                unit_ball_volume(dim) * radius.powi(dim as i32)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 8 {
            return Err(PlapError::InvalidSpec(format!(
                "resolution must be >= 8, got {}",
                self.resolution
            )));
        }
        match self.kind {
            DomainKind::Interval { a, b } if !(a < b) || !a.is_finite() || !b.is_finite() => {
                Err(PlapError::InvalidSpec(format!("interval needs a < b, got [{a}, {b}]")))
            }
            DomainKind::Rectangle { lx, ly } if !(lx > 0.0 && ly > 0.0) => {
                Err(PlapError::InvalidSpec(format!("rectangle extents must be positive, got {lx} x {ly}")))
            }
            DomainKind::RadialBall { radius, .. } if !(radius > 0.0) => {
                Err(PlapError::InvalidSpec(format!("ball radius must be positive, got {radius}")))
            }
            DomainKind::RadialBall { dim, .. } if !(1..=3).contains(&dim) => {
                Err(PlapError::InvalidSpec(format!("ball dimension must be 1, 2 or 3, got {dim}")))
            }
            _ => Ok(()),
        }
    }
}

/// Volume of the unit ball in R^N for N in {1,2,3}.
pub fn unit_ball_volume(dim: u32) -> f64 {
    match dim {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => f64::NAN,
    }
}

#[derive(Debug, Clone)]
pub(crate) enum Topology {
    Interval {
        h: f64,
    },
    /// Structured triangulation of a tensor grid; the diagonal of every
    /// grid cell runs from (i,j) to (i+1,j+1). Node index is `i*n + j`
    /// (lexicographic in (x,y)), `i` along x, `j` along y.
    Rectangle {
        n: usize,
        hx: f64,
        hy: f64,
        /// DST-I matrix for the interior grid, row-major (n-2)^2.
        sine: Vec<f64>,
        /// 1D Dirichlet second-difference eigenvalues, length n-2.
        eig: Vec<f64>,
    },
    Radial {
        h: f64,
        dim: u32,
        /// Surface area of the unit sphere, N * omega_N.
        surface: f64,
    },
}

/// Discretized domain: node coordinates, boundary flags, quadrature weights.
#[derive(Debug, Clone)]
pub struct Mesh {
    spec: DomainSpec,
    coords: Vec<[f64; 2]>,
    node_weights: Vec<f64>,
    boundary: Vec<bool>,
    pub(crate) topo: Topology,
}

/// Build the mesh for a validated spec.
///
/// Node count is `n` for the interval and radial ball, `n^2` for the
/// rectangle. Node quadrature weights sum to |Omega| up to rounding.
pub fn build_mesh(spec: DomainSpec) -> Result<Arc<Mesh>> {
    spec.validate()?;
    let n = spec.resolution;
    let mesh = match spec.kind {
        DomainKind::Interval { a, b } => {
            let h = (b - a) / (n - 1) as f64;
            let coords: Vec<[f64; 2]> = (0..n).map(|i| [a + i as f64 * h, 0.0]).collect();
            let mut node_weights = vec![h; n];
            node_weights[0] = 0.5 * h;
            node_weights[n - 1] = 0.5 * h;
            let mut boundary = vec![false; n];
            boundary[0] = true;
            boundary[n - 1] = true;
            Mesh { spec, coords, node_weights, boundary, topo: Topology::Interval { h } }
        }
        DomainKind::Rectangle { lx, ly } => {
            let hx = lx / (n - 1) as f64;
            let hy = ly / (n - 1) as f64;
            let mut coords = Vec::with_capacity(n * n);
            let mut boundary = vec![false; n * n];
            for i in 0..n {
                for j in 0..n {
                    coords.push([i as f64 * hx, j as f64 * hy]);
                    if i == 0 || j == 0 || i == n - 1 || j == n - 1 {
                        boundary[i * n + j] = true;
                    }
                }
            }
            // Lumped P1 weights: a third of each adjacent triangle area.
            let third = hx * hy / 6.0;
            let mut node_weights = vec![0.0; n * n];
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    let (v00, v10, v01, v11) = (i * n + j, (i + 1) * n + j, i * n + j + 1, (i + 1) * n + j + 1);
                    // lower triangle (v00, v10, v11), upper triangle (v00, v11, v01)
                    for v in [v00, v10, v11, v00, v11, v01] {
                        node_weights[v] += third;
                    }
                }
            }
            let m = n - 2;
            let mut sine = vec![0.0; m * m];
            let mut eig = vec![0.0; m];
            for k in 0..m {
                let t = (k + 1) as f64 * std::f64::consts::PI / (m + 1) as f64;
                eig[k] = 2.0 - 2.0 * t.cos();
                for i in 0..m {
                    sine[k * m + i] = ((k + 1) as f64 * (i + 1) as f64 * std::f64::consts::PI
                        / (m + 1) as f64)
                        .sin();
                }
            }
            Mesh {
                spec,
                coords,
                node_weights,
                boundary,
                topo: Topology::Rectangle { n, hx, hy, sine, eig },
            }
        }
        DomainKind::RadialBall { radius, dim } => {
            let h = radius / (n - 1) as f64;
            let surface = dim as f64 * unit_ball_volume(dim);
            let coords: Vec<[f64; 2]> = (0..n).map(|j| [j as f64 * h, 0.0]).collect();
            let mut node_weights = vec![0.0; n];
            for j in 0..n - 1 {
                let w = cell_mass_radial(j as f64 * h, (j + 1) as f64 * h, dim, surface);
                node_weights[j] += 0.5 * w;
                node_weights[j + 1] += 0.5 * w;
            }
            let mut boundary = vec![false; n];
            boundary[n - 1] = true;
            Mesh { spec, coords, node_weights, boundary, topo: Topology::Radial { h, dim, surface } }
        }
    };
    Ok(Arc::new(mesh))
}

/// Exact mass of one radial cell: surface * (r1^N - r0^N) / N.
fn cell_mass_radial(r0: f64, r1: f64, dim: u32, surface: f64) -> f64 {
    surface * (r1.powi(dim as i32) - r0.powi(dim as i32)) / dim as f64
}

impl Mesh {
    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn node_count(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self, i: usize) -> [f64; 2] {
        self.coords[i]
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn interior_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&i| !self.boundary[i])
    }

    pub fn node_weight(&self, i: usize) -> f64 {
        self.node_weights[i]
    }

    /// Sum of node quadrature weights (equals |Omega| up to rounding).
    pub fn weight_sum(&self) -> f64 {
        self.node_weights.iter().sum()
    }

    /// Integral of nodal data against the node weights.
    pub fn integrate_nodal(&self, vals: impl Fn(usize) -> f64) -> f64 {
        (0..self.node_count()).map(|i| self.node_weights[i] * vals(i)).sum()
    }

    /// Number of gradient cells (intervals, triangles or radial cells).
    pub(crate) fn cell_count(&self) -> usize {
        match &self.topo {
            Topology::Interval { .. } | Topology::Radial { .. } => self.node_count() - 1,
            Topology::Rectangle { n, .. } => 2 * (n - 1) * (n - 1),
        }
    }

    /// Visit every cell as `(weight, grad, avg, nodes, grad_coeffs, n_nodes)`:
    /// `grad` is the constant gradient on the cell, `avg` the mean of the
    /// nodal values, `nodes` the (up to 3) node indices, `grad_coeffs[k]`
    /// the gradient of the hat function of `nodes[k]` restricted to the cell.
    pub(crate) fn for_each_cell<F>(&self, u: &[f64], mut f: F)
    where
        F: FnMut(f64, [f64; 2], f64, &[usize; 3], &[[f64; 2]; 3], usize),
    {
        match &self.topo {
            Topology::Interval { h } => {
                let inv = 1.0 / h;
                for i in 0..self.node_count() - 1 {
                    let g = (u[i + 1] - u[i]) * inv;
                    let avg = 0.5 * (u[i] + u[i + 1]);
                    f(
                        *h,
                        [g, 0.0],
                        avg,
                        &[i, i + 1, usize::MAX],
                        &[[-inv, 0.0], [inv, 0.0], [0.0, 0.0]],
                        2,
                    );
                }
            }
            Topology::Radial { h, dim, surface } => {
                let inv = 1.0 / h;
                for j in 0..self.node_count() - 1 {
                    let w = cell_mass_radial(j as f64 * h, (j + 1) as f64 * h, *dim, *surface);
                    let g = (u[j + 1] - u[j]) * inv;
                    let avg = 0.5 * (u[j] + u[j + 1]);
                    f(
                        w,
                        [g, 0.0],
                        avg,
                        &[j, j + 1, usize::MAX],
                        &[[-inv, 0.0], [inv, 0.0], [0.0, 0.0]],
                        2,
                    );
                }
            }
            Topology::Rectangle { n, hx, hy, .. } => {
                let area = 0.5 * hx * hy;
                let (ix, iy) = (1.0 / hx, 1.0 / hy);
                let third = 1.0 / 3.0;
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        let v00 = i * n + j;
                        let v10 = (i + 1) * n + j;
                        let v01 = i * n + j + 1;
                        let v11 = (i + 1) * n + j + 1;
                        // lower triangle (v00, v10, v11)
                        let gx = (u[v10] - u[v00]) * ix;
                        let gy = (u[v11] - u[v10]) * iy;
                        f(
                            area,
                            [gx, gy],
                            (u[v00] + u[v10] + u[v11]) * third,
                            &[v00, v10, v11],
                            &[[-ix, 0.0], [ix, -iy], [0.0, iy]],
                            3,
                        );
                        // upper triangle (v00, v11, v01)
                        let gx = (u[v11] - u[v01]) * ix;
                        let gy = (u[v01] - u[v00]) * iy;
                        f(
                            area,
                            [gx, gy],
                            (u[v00] + u[v11] + u[v01]) * third,
                            &[v00, v11, v01],
                            &[[0.0, -iy], [ix, 0.0], [-ix, iy]],
                            3,
                        );
                    }
                }
            }
        }
    }

    /// Solve the cell-weighted stiffness system `K_w z = r` (Dirichlet)
    /// where cell c contributes `omega_c * w_c grad phi_i . grad phi_j`.
    /// Only the 1D topologies are tridiagonal; returns `None` for the
    /// rectangle, where callers fall back to [`Mesh::poisson_solve`].
    pub(crate) fn weighted_stiffness_solve(&self, omega: &[f64], r: &[f64]) -> Option<Vec<f64>> {
        let (h, radial) = match &self.topo {
            Topology::Interval { h } => (*h, None),
            Topology::Radial { h, dim, surface } => (*h, Some((*dim, *surface))),
            Topology::Rectangle { .. } => return None,
        };
        let n = self.node_count();
        let inv2 = 1.0 / (h * h);
        // cell conductances
        let s: Vec<f64> = (0..n - 1)
            .map(|j| {
                let w = match radial {
                    Some((dim, surface)) => cell_mass_radial(j as f64 * h, (j + 1) as f64 * h, dim, surface),
                    None => h,
                };
                w * omega[j] * inv2
            })
            .collect();
        // interior unknowns: 1..n-1 for the interval, 0..n-1 for radial
        let lo = if radial.is_some() { 0 } else { 1 };
        let m = n - 1 - lo;
        let mut diag = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for k in 0..m {
            let node = lo + k;
            diag[k] = s[node] + if node > 0 { s[node - 1] } else { 0.0 };
            rhs[k] = r[node];
        }
        for k in 1..m {
            let off = -s[lo + k - 1];
            let w = off / diag[k - 1];
            diag[k] -= w * off;
            rhs[k] -= w * rhs[k - 1];
        }
        let mut z = vec![0.0; n];
        z[lo + m - 1] = rhs[m - 1] / diag[m - 1];
        for k in (0..m - 1).rev() {
            z[lo + k] = (rhs[k] + s[lo + k] * z[lo + k + 1]) / diag[k];
        }
        Some(z)
    }

    /// Solve the p=2 stiffness system `K z = r` with homogeneous Dirichlet
    /// data; boundary entries of `r` are ignored and `z` is zero there.
    /// This is the preconditioner of every descent solver.
    pub(crate) fn poisson_solve(&self, r: &[f64]) -> Vec<f64> {
        match &self.topo {
            Topology::Interval { h } => {
                let n = self.node_count();
                let m = n - 2;
                let s = 1.0 / h; // off-diagonal -s, diagonal 2s
                let mut diag = vec![2.0 * s; m];
                let mut rhs: Vec<f64> = r[1..n - 1].to_vec();
                for k in 1..m {
                    let w = (-s) / diag[k - 1];
                    diag[k] -= w * (-s);
                    rhs[k] -= w * rhs[k - 1];
                }
                let mut z = vec![0.0; n];
                z[n - 2] = rhs[m - 1] / diag[m - 1];
                for k in (0..m - 1).rev() {
                    z[k + 1] = (rhs[k] - (-s) * z[k + 2]) / diag[k];
                }
                z
            }
            Topology::Radial { h, dim, surface } => {
                let n = self.node_count();
                let m = n - 1; // interior nodes 0..n-2 (center included)
                let inv2 = 1.0 / (h * h);
                // cell stiffness s_j couples nodes j and j+1
                let s: Vec<f64> = (0..n - 1)
                    .map(|j| cell_mass_radial(j as f64 * h, (j + 1) as f64 * h, *dim, *surface) * inv2)
                    .collect();
                let mut diag = vec![0.0; m];
                let mut lower = vec![0.0; m]; // lower[k] couples k-1,k
                for k in 0..m {
                    diag[k] = s[k] + if k > 0 { s[k - 1] } else { 0.0 };
                    if k > 0 {
                        lower[k] = -s[k - 1];
                    }
                }
                let mut rhs: Vec<f64> = r[..m].to_vec();
                for k in 1..m {
                    let w = lower[k] / diag[k - 1];
                    diag[k] -= w * -s[k - 1];
                    rhs[k] -= w * rhs[k - 1];
                }
                let mut z = vec![0.0; n];
                z[m - 1] = rhs[m - 1] / diag[m - 1];
                for k in (0..m - 1).rev() {
                    z[k] = (rhs[k] - (-s[k]) * z[k + 1]) / diag[k];
                }
                z
            }
            Topology::Rectangle { n, hx, hy, sine, eig } => {
                let m = n - 2;
                let (cx, cy) = (hy / hx, hx / hy);
                // gather interior rhs into an m x m matrix, row index = x
                let mut rmat = vec![0.0; m * m];
                for i in 0..m {
                    for j in 0..m {
                        rmat[i * m + j] = r[(i + 1) * n + (j + 1)];
                    }
                }
                let t1 = dst_rows(sine, &rmat, m); // S * R
                let mut hat = dst_cols(sine, &t1, m); // S * R * S^T
                let norm = 4.0 / ((m + 1) as f64 * (m + 1) as f64);
                for k in 0..m {
                    for l in 0..m {
                        hat[k * m + l] *= norm / (cx * eig[k] + cy * eig[l]);
                    }
                }
                let t2 = dst_rows(sine, &hat, m);
                let zmat = dst_cols(sine, &t2, m);
                let mut z = vec![0.0; n * n];
                for i in 0..m {
                    for j in 0..m {
                        z[(i + 1) * n + (j + 1)] = zmat[i * m + j];
                    }
                }
                z
            }
        }
    }
}

/// Y = S * X for row-major m x m matrices.
fn dst_rows(s: &[f64], x: &[f64], m: usize) -> Vec<f64> {
    let mut y = vec![0.0; m * m];
    for k in 0..m {
        for i in 0..m {
            let ski = s[k * m + i];
            if ski == 0.0 {
                continue;
            }
            let xrow = &x[i * m..(i + 1) * m];
            let yrow = &mut y[k * m..(k + 1) * m];
            for j in 0..m {
                yrow[j] += ski * xrow[j];
            }
        }
    }
    y
}

/// Y = X * S^T for row-major m x m matrices (S symmetric, so Y = X * S).
fn dst_cols(s: &[f64], x: &[f64], m: usize) -> Vec<f64> {
    let mut y = vec![0.0; m * m];
    for i in 0..m {
        let xrow = &x[i * m..(i + 1) * m];
        let yrow = &mut y[i * m..(i + 1) * m];
        for j in 0..m {
            let xij = xrow[j];
            let srow = &s[j * m..(j + 1) * m];
            for l in 0..m {
                yrow[l] += xij * srow[l];
            }
        }
    }
    y
}

/// Scalar nodal field on a mesh.
#[derive(Debug, Clone)]
pub struct GridFunction {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Result<Self> {
        if values.len() != mesh.node_count() {
            return Err(PlapError::InvalidParams(format!(
                "value length {} does not match node count {}",
                values.len(),
                mesh.node_count()
            )));
        }
        Ok(Self { mesh, values })
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.node_count();
        Self { mesh, values: vec![0.0; n] }
    }

    pub fn constant(mesh: Arc<Mesh>, c: f64) -> Self {
        let n = mesh.node_count();
        Self { mesh, values: vec![c; n] }
    }

    /// Sample an analytic function at the nodes. For 1D and radial meshes
    /// the second coordinate is 0.
    pub fn from_fn(mesh: Arc<Mesh>, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let values = (0..mesh.node_count())
            .map(|i| {
                let [x, y] = mesh.coords(i);
                f(x, y)
            })
            .collect();
        Self { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// True when every boundary node is exactly zero.
    pub fn is_dirichlet(&self) -> bool {
        (0..self.values.len()).all(|i| !self.mesh.is_boundary(i) || self.values[i] == 0.0)
    }

    /// Force exact zeros on the boundary.
    pub fn zero_boundary(&mut self) {
        for i in 0..self.values.len() {
            if self.mesh.is_boundary(i) {
                self.values[i] = 0.0;
            }
        }
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.values {
            *v *= c;
        }
    }

    /// CSV serialization: header `x[,y],value`, one row per node, nodes in
    /// lexicographic coordinate order (the mesh's native ordering).
    pub fn to_csv(&self) -> String {
        let two_d = matches!(self.mesh.spec().kind, DomainKind::Rectangle { .. });
        let mut out = String::new();
        if two_d {
            out.push_str("x,y,value\n");
        } else {
            out.push_str("x,value\n");
        }
        for i in 0..self.values.len() {
            let [x, y] = self.mesh.coords(i);
            if two_d {
                let _ = writeln!(out, "{},{},{}", x, y, self.values[i]);
            } else {
                let _ = writeln!(out, "{},{}", x, self.values[i]);
            }
        }
        out
    }
}

/// `(integral of |u|^s)^(1/s)` against the node weights; requires `s >= 1`.
pub fn lp_norm(u: &GridFunction, s: f64) -> Result<f64> {
    if !(s >= 1.0) || !s.is_finite() {
        return Err(PlapError::InvalidParams(format!("norm index must satisfy 1 <= s < inf, got {s}")));
    }
    let mesh = u.mesh();
    let vals = u.values();
    let total = if s == 1.0 {
        mesh.integrate_nodal(|i| vals[i].abs())
    } else if s == 2.0 {
        mesh.integrate_nodal(|i| vals[i] * vals[i])
    } else {
        mesh.integrate_nodal(|i| vals[i].abs().powf(s))
    };
    Ok(if s == 1.0 {
        total
    } else if s == 2.0 {
        total.sqrt()
    } else {
        total.powf(1.0 / s)
    })
}

/// Max of |u| over the nodes and the smallest node index attaining it.
pub fn sup_norm(u: &GridFunction) -> (f64, usize) {
    let mut best = 0.0_f64;
    let mut arg = 0usize;
    for (i, &v) in u.values().iter().enumerate() {
        let a = v.abs();
        if a > best {
            best = a;
            arg = i;
        }
    }
    (best, arg)
}

/// `(integral of |grad u|^p)^(1/p)` over the cells; requires `p > 1`.
pub fn grad_lp_norm(u: &GridFunction, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(PlapError::InvalidParams(format!("gradient norm needs p > 1, got {p}")));
    }
    let mut total = 0.0;
    u.mesh().for_each_cell(u.values(), |w, g, _, _, _, _| {
        let g2 = g[0] * g[0] + g[1] * g[1];
        total += if p == 2.0 { w * g2 } else { w * g2.sqrt().powf(p) };
    });
    Ok(if p == 2.0 { total.sqrt() } else { total.powf(1.0 / p) })
}

/// `sup u + sup |grad u|` with the gradient maximized over cells.
pub fn c1_norm(u: &GridFunction) -> f64 {
    let mut gmax = 0.0_f64;
    u.mesh().for_each_cell(u.values(), |_, g, _, _, _, _| {
        let m = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if m > gmax {
            gmax = m;
        }
    });
    sup_norm(u).0 + gmax
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval_mesh(n: usize) -> Arc<Mesh> {
        build_mesh(DomainSpec::interval(0.0, 1.0, n)).unwrap()
    }

    #[test]
    fn interval_counts_and_weights() {
        let mesh = interval_mesh(9);
        assert_eq!(mesh.node_count(), 9);
        assert_eq!((0..9).filter(|&i| mesh.is_boundary(i)).count(), 2);
        assert!((mesh.weight_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rectangle_counts_and_weights() {
        let mesh = build_mesh(DomainSpec::rectangle(1.0, 1.0, 9)).unwrap();
        assert_eq!(mesh.node_count(), 81);
        assert!((mesh.weight_sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ball_weights_sum_to_measure() {
        let mesh = build_mesh(DomainSpec::ball(1.0, 2, 64)).unwrap();
        assert!((mesh.weight_sum() - std::f64::consts::PI).abs() < 1e-12 * std::f64::consts::PI);
        let m3 = build_mesh(DomainSpec::ball(0.5, 3, 33)).unwrap();
        let vol = 4.0 * std::f64::consts::PI / 3.0 * 0.125;
        assert!((m3.weight_sum() - vol).abs() < 1e-12 * vol);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(build_mesh(DomainSpec::interval(1.0, 0.0, 16)).is_err());
        assert!(build_mesh(DomainSpec::interval(0.0, 1.0, 7)).is_err());
        assert!(build_mesh(DomainSpec::rectangle(-1.0, 1.0, 16)).is_err());
        assert!(build_mesh(DomainSpec::ball(1.0, 4, 16)).is_err());
    }

    #[test]
    fn quadrature_exact_for_linears() {
        let mesh = interval_mesh(17);
        // integral of 2x+1 over (0,1) = 2
        let s = mesh.integrate_nodal(|i| 2.0 * mesh.coords(i)[0] + 1.0);
        assert!((s - 2.0).abs() < 1e-12);
        let rect = build_mesh(DomainSpec::rectangle(1.0, 1.0, 9)).unwrap();
        let s = rect.integrate_nodal(|i| {
            let [x, y] = rect.coords(i);
            x + y
        });
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lp_norm_examples() {
        let mesh = interval_mesh(1025);
        let one = GridFunction::constant(mesh.clone(), 1.0);
        assert!((lp_norm(&one, 2.0).unwrap() - 1.0).abs() < 1e-12);

        let s = GridFunction::from_fn(mesh.clone(), |x, _| (std::f64::consts::PI * x).sin());
        assert!((lp_norm(&s, 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-5);
        assert!((lp_norm(&s, 1.0).unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-5);

        assert!(lp_norm(&one, 0.5).is_err());
    }

    #[test]
    fn lp_norm_scales_exactly() {
        let mesh = interval_mesh(65);
        let u = GridFunction::from_fn(mesh.clone(), |x, _| x * (1.0 - x) + 0.3);
        let mut v = u.clone();
        v.scale(2.0);
        for s in [1.0, 2.0] {
            assert_eq!(lp_norm(&v, s).unwrap(), 2.0 * lp_norm(&u, s).unwrap());
        }
        let s = 2.7;
        let (a, b) = (lp_norm(&v, s).unwrap(), 2.0 * lp_norm(&u, s).unwrap());
        assert!((a - b).abs() <= 1e-13 * b);
    }

    #[test]
    fn sup_norm_examples() {
        let mesh = interval_mesh(65); // odd count, midpoint is a node
        let zero = GridFunction::zeros(mesh.clone());
        assert_eq!(sup_norm(&zero), (0.0, 0));

        let s = GridFunction::from_fn(mesh.clone(), |x, _| (std::f64::consts::PI * x).sin());
        let (v, arg) = sup_norm(&s);
        assert!((v - 1.0).abs() < 1e-3);
        assert_eq!(arg, 32);

        let par = GridFunction::from_fn(mesh.clone(), |x, _| 0.5 * x * (1.0 - x));
        assert!((sup_norm(&par).0 - 0.125).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_tie_break_smallest_index() {
        let mesh = interval_mesh(9);
        let mut vals = vec![0.0; 9];
        vals[3] = -2.0;
        vals[6] = 2.0;
        let u = GridFunction::new(mesh, vals).unwrap();
        assert_eq!(sup_norm(&u), (2.0, 3));
    }

    #[test]
    fn grad_norm_examples() {
        let mesh = interval_mesh(2049);
        let zero = GridFunction::zeros(mesh.clone());
        assert_eq!(grad_lp_norm(&zero, 2.0).unwrap(), 0.0);

        let s = GridFunction::from_fn(mesh.clone(), |x, _| (std::f64::consts::PI * x).sin());
        let expect = std::f64::consts::PI / 2.0f64.sqrt();
        assert!((grad_lp_norm(&s, 2.0).unwrap() - expect).abs() < 1e-5);

        let par = GridFunction::from_fn(mesh.clone(), |x, _| 0.5 * x * (1.0 - x));
        assert!((grad_lp_norm(&par, 2.0).unwrap() - (1.0f64 / 12.0).sqrt()).abs() < 1e-6);

        assert!(grad_lp_norm(&s, 1.0).is_err());
    }

    #[test]
    fn c1_norm_examples() {
        let mesh = interval_mesh(2049);
        assert_eq!(c1_norm(&GridFunction::zeros(mesh.clone())), 0.0);

        let lin = GridFunction::from_fn(mesh.clone(), |x, _| x);
        assert!((c1_norm(&lin) - 2.0).abs() < 1e-12);

        let s = GridFunction::from_fn(mesh.clone(), |x, _| (std::f64::consts::PI * x).sin());
        assert!((c1_norm(&s) - (1.0 + std::f64::consts::PI)).abs() < 1e-4);
    }

    #[test]
    fn poisson_solve_interval_matches_torsion() {
        // -z'' = 1 with z(0)=z(1)=0 has z = x(1-x)/2; rhs entries are the
        // weak load of f=1 against hat functions: h per interior node.
        let mesh = interval_mesh(129);
        let n = mesh.node_count();
        let h = 1.0 / (n - 1) as f64;
        let rhs = vec![h; n];
        let z = mesh.poisson_solve(&rhs);
        for i in 0..n {
            let x = mesh.coords(i)[0];
            assert!((z[i] - 0.5 * x * (1.0 - x)).abs() < 1e-12, "node {i}");
        }
    }

    #[test]
    fn poisson_solve_rectangle_matches_eigenfunction() {
        // K e = mu e for e = sin(pi x) sin(pi y) discrete mode, so
        // poisson_solve(K e) recovers e.
        let mesh = build_mesh(DomainSpec::rectangle(1.0, 1.0, 33)).unwrap();
        let n = 33;
        let e = GridFunction::from_fn(mesh.clone(), |x, y| {
            (std::f64::consts::PI * x).sin() * (std::f64::consts::PI * y).sin()
        });
        // apply the 5-point stencil (hx = hy = h so K = 4u - neighbors)
        let vals = e.values();
        let mut ke = vec![0.0; n * n];
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                ke[i * n + j] = 4.0 * vals[i * n + j]
                    - vals[(i - 1) * n + j]
                    - vals[(i + 1) * n + j]
                    - vals[i * n + j - 1]
                    - vals[i * n + j + 1];
            }
        }
        let z = mesh.poisson_solve(&ke);
        for i in 0..n * n {
            if !mesh.is_boundary(i) {
                assert!((z[i] - vals[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn poisson_solve_radial_reproduces_disc_torsion() {
        // For N=2: -(r u')' = r with u(R)=0, u'(0)=0 has u = (R^2-r^2)/4.
        // The discrete load of f=1 is the node weight.
        let mesh = build_mesh(DomainSpec::ball(1.0, 2, 257)).unwrap();
        let rhs: Vec<f64> = (0..mesh.node_count()).map(|i| mesh.node_weight(i)).collect();
        let z = mesh.poisson_solve(&rhs);
        for i in 0..mesh.node_count() {
            let r = mesh.coords(i)[0];
            assert!((z[i] - 0.25 * (1.0 - r * r)).abs() < 2e-5, "r={r}");
        }
    }

    proptest::proptest! {
        // Jensen: on unit-measure domains the discrete L^s norms are
        // monotone in s for the node-weight measure.
        #[test]
        fn lp_norm_monotone_in_s(
            vals in proptest::collection::vec(-2.0..2.0f64, 33),
            s1 in 1.0..5.0f64,
            ds in 0.0..3.0f64,
        ) {
            let mesh = build_mesh(DomainSpec::interval(0.0, 1.0, 33)).unwrap();
            let u = GridFunction::new(mesh, vals).unwrap();
            let a = lp_norm(&u, s1).unwrap();
            let b = lp_norm(&u, s1 + ds).unwrap();
            proptest::prop_assert!(a <= b * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn lp_norm_monotone_in_s_square(
            vals in proptest::collection::vec(-2.0..2.0f64, 64),
            s1 in 1.0..4.0f64,
            ds in 0.0..2.0f64,
        ) {
            let mesh = build_mesh(DomainSpec::rectangle(1.0, 1.0, 8)).unwrap();
            let u = GridFunction::new(mesh, vals).unwrap();
            let a = lp_norm(&u, s1).unwrap();
            let b = lp_norm(&u, s1 + ds).unwrap();
            proptest::prop_assert!(a <= b * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn csv_round_shape() {
        let mesh = interval_mesh(8);
        let u = GridFunction::from_fn(mesh, |x, _| x);
        let csv = u.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "x,value");
        assert_eq!(csv.lines().count(), 9);

        let rect = build_mesh(DomainSpec::rectangle(1.0, 2.0, 8)).unwrap();
        let v = GridFunction::zeros(rect);
        assert!(v.to_csv().starts_with("x,y,value\n"));
        // lexicographic order: the first rows share x = 0 with y ascending
        let row2 = v.to_csv().lines().nth(2).unwrap().to_string();
        assert!(row2.starts_with("0,0.2857142857142857"));
    }
}

