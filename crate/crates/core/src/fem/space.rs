//! Degree-of-freedom layout for the coupled system and coefficient storage.
//!
//! Global unknown ordering: velocity (x component: V vertex values then T
//! bubbles; y component likewise), current density (one flux per edge),
//! pressure (per vertex), potential (per triangle), temperature (per vertex),
//! then the mean-value multipliers.

use crate::error::{Error, Result};
use crate::fem::basis::Element;
use crate::fem::quadrature::gauss_segment2;
use crate::mesh::{BoundaryTag, Mesh, Point};

/// Boundary condition pairing for the current density and potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryMode {
    /// `J.n = 0` on the boundary; the potential is fixed by a zero mean.
    Insulating,
    /// `phi = 0` on the boundary, imposed naturally; `J.n` is free.
    Conducting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub u: usize,
    pub j: usize,
    pub p: usize,
    pub phi: usize,
    pub theta: usize,
    pub p_border: usize,
    pub phi_border: Option<usize>,
    pub total: usize,
    /// Scalar velocity DOFs per component: `V + T`.
    pub n_scalar_u: usize,
}

/// Field spaces on a mesh together with the essential boundary DOF lists.
#[derive(Clone, Debug)]
pub struct FeSystem {
    mesh: Mesh,
    mode: BoundaryMode,
    temperature_walls: Vec<BoundaryTag>,
    pub layout: Layout,
    /// Sorted list of constrained global DOFs.
    pub constrained: Vec<usize>,
    is_constrained: Vec<bool>,
}

impl FeSystem {
    /// `temperature_walls` lists the walls carrying Dirichlet temperature data;
    /// the velocity is prescribed on the whole boundary.
    pub fn new(mesh: Mesh, mode: BoundaryMode, temperature_walls: &[BoundaryTag]) -> Result<Self> {
        let (nv, nt, ne) = (mesh.num_vertices(), mesh.num_triangles(), mesh.num_edges());
        for t in 0..nt {
            Element::new(&mesh, t)?;
        }
        let n_scalar_u = nv + nt;
        let u = 0;
        let j = 2 * n_scalar_u;
        let p = j + ne;
        let phi = p + nv;
        let theta = phi + nt;
        let p_border = theta + nv;
        let (phi_border, total) = match mode {
            BoundaryMode::Insulating => (Some(p_border + 1), p_border + 2),
            BoundaryMode::Conducting => (None, p_border + 1),
        };
        let layout = Layout { u, j, p, phi, theta, p_border, phi_border, total, n_scalar_u };

        let mut is_constrained = vec![false; total];
        for e in mesh.boundary_edges() {
            let tag = mesh.edge_tags[e];
            for &v in &mesh.edges[e] {
                is_constrained[u + v] = true;
                is_constrained[u + n_scalar_u + v] = true;
                if temperature_walls.contains(&tag) {
                    is_constrained[theta + v] = true;
                }
            }
            if mode == BoundaryMode::Insulating {
                is_constrained[j + e] = true;
            }
        }
        let constrained = (0..total).filter(|&d| is_constrained[d]).collect();
        Ok(FeSystem { mesh, mode, temperature_walls: temperature_walls.to_vec(), layout, constrained, is_constrained })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn mode(&self) -> BoundaryMode {
        self.mode
    }

    pub fn temperature_walls(&self) -> &[BoundaryTag] {
        &self.temperature_walls
    }

    pub fn total(&self) -> usize {
        self.layout.total
    }

    pub fn num_borders(&self) -> usize {
        1 + usize::from(self.layout.phi_border.is_some())
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.is_constrained[dof]
    }

    pub fn element(&self, t: usize) -> Element {
        Element::new(&self.mesh, t).expect("elements validated at construction")
    }

    /// Global velocity DOFs of triangle `t`: four scalar slots for x, then four for y.
    pub fn velocity_dofs(&self, t: usize) -> [usize; 8] {
        let l = &self.layout;
        let [a, b, c] = self.mesh.triangles[t];
        let bubble = self.mesh.num_vertices() + t;
        let x = [a, b, c, bubble].map(|d| l.u + d);
        let y = x.map(|d| d + l.n_scalar_u);
        [x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3]]
    }

    pub fn current_dofs(&self, t: usize) -> [usize; 3] {
        self.mesh.tri_edges[t].map(|r| self.layout.j + r.edge)
    }

    pub fn pressure_dofs(&self, t: usize) -> [usize; 3] {
        self.mesh.triangles[t].map(|v| self.layout.p + v)
    }

    pub fn potential_dof(&self, t: usize) -> usize {
        self.layout.phi + t
    }

    pub fn temperature_dofs(&self, t: usize) -> [usize; 3] {
        self.mesh.triangles[t].map(|v| self.layout.theta + v)
    }

    /// Values of the constrained DOFs given the boundary data. Current fluxes are
    /// always constrained to zero.
    pub fn boundary_values(
        &self,
        velocity: &dyn Fn(Point) -> [f64; 2],
        temperature: &dyn Fn(Point) -> f64,
    ) -> Vec<(usize, f64)> {
        let l = &self.layout;
        let nv = self.mesh.num_vertices();
        self.constrained
            .iter()
            .map(|&d| {
                let value = if d < l.u + l.n_scalar_u {
                    velocity(self.mesh.vertices[d - l.u])[0]
                } else if d < l.j {
                    velocity(self.mesh.vertices[d - l.u - l.n_scalar_u])[1]
                } else if d >= l.theta && d < l.theta + nv {
                    temperature(self.mesh.vertices[d - l.theta])
                } else {
                    0.0
                };
                (d, value)
            })
            .collect()
    }
}

/// Coefficients of the five discrete fields.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSolution {
    /// `2 (V + T)` entries: x component then y component.
    pub u: Vec<f64>,
    pub j: Vec<f64>,
    pub p: Vec<f64>,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
}

impl FieldSolution {
    pub fn zeros(sys: &FeSystem) -> Self {
        let m = sys.mesh();
        FieldSolution {
            u: vec![0.0; 2 * sys.layout.n_scalar_u],
            j: vec![0.0; m.num_edges()],
            p: vec![0.0; m.num_vertices()],
            phi: vec![0.0; m.num_triangles()],
            theta: vec![0.0; m.num_vertices()],
        }
    }

    pub fn from_global(sys: &FeSystem, x: &[f64]) -> Result<Self> {
        let l = &sys.layout;
        if x.len() != l.total {
            return Err(Error::DimensionMismatch { expected: l.total, got: x.len() });
        }
        Ok(FieldSolution {
            u: x[l.u..l.j].to_vec(),
            j: x[l.j..l.p].to_vec(),
            p: x[l.p..l.phi].to_vec(),
            phi: x[l.phi..l.theta].to_vec(),
            theta: x[l.theta..l.p_border].to_vec(),
        })
    }

    /// Global vector with zero multipliers.
    pub fn to_global(&self, sys: &FeSystem) -> Vec<f64> {
        let mut x = Vec::with_capacity(sys.total());
        x.extend_from_slice(&self.u);
        x.extend_from_slice(&self.j);
        x.extend_from_slice(&self.p);
        x.extend_from_slice(&self.phi);
        x.extend_from_slice(&self.theta);
        x.resize(sys.total(), 0.0);
        x
    }

    pub fn is_finite(&self) -> bool {
        [&self.u, &self.j, &self.p, &self.phi, &self.theta].iter().all(|v| v.iter().all(|x| x.is_finite()))
    }

    /// Velocity (with bubble) in element `el` at barycentric point `lam`.
    pub fn velocity_at(&self, sys: &FeSystem, el: &Element, lam: [f64; 3]) -> Point {
        let b = el.mini(lam);
        let dofs = sys.velocity_dofs(el.index);
        let mut v = [0.0; 2];
        for k in 0..4 {
            v[0] += self.u[dofs[k]] * b.values[k];
            v[1] += self.u[dofs[k + 4]] * b.values[k];
        }
        v
    }

    /// Velocity gradient `[[du1/dx, du1/dy], [du2/dx, du2/dy]]`.
    pub fn velocity_grad_at(&self, sys: &FeSystem, el: &Element, lam: [f64; 3]) -> [[f64; 2]; 2] {
        let b = el.mini(lam);
        let dofs = sys.velocity_dofs(el.index);
        let mut g = [[0.0; 2]; 2];
        for k in 0..4 {
            for d in 0..2 {
                g[0][d] += self.u[dofs[k]] * b.grads[k][d];
                g[1][d] += self.u[dofs[k + 4]] * b.grads[k][d];
            }
        }
        g
    }

    pub fn current_at(&self, el: &Element, lam: [f64; 3]) -> (Point, f64) {
        let (vals, divs) = el.rt0_all(lam);
        let mut v = [0.0; 2];
        let mut div = 0.0;
        for k in 0..3 {
            let c = self.j[el.edges[k].edge];
            v[0] += c * vals[k][0];
            v[1] += c * vals[k][1];
            div += c * divs[k];
        }
        (v, div)
    }

    /// Constant divergence of the current density on triangle `t`.
    pub fn current_div(&self, el: &Element) -> f64 {
        (0..3).map(|k| self.j[el.edges[k].edge] * 2.0 * el.edges[k].sign * el.edge_len[k] / (2.0 * el.area)).sum()
    }

    pub fn pressure_at(&self, el: &Element, lam: [f64; 3]) -> f64 {
        (0..3).map(|k| self.p[el.vertices[k]] * lam[k]).sum()
    }

    pub fn temperature_at(&self, el: &Element, lam: [f64; 3]) -> f64 {
        (0..3).map(|k| self.theta[el.vertices[k]] * lam[k]).sum()
    }

    pub fn temperature_grad(&self, el: &Element) -> Point {
        let mut g = [0.0; 2];
        for k in 0..3 {
            g[0] += self.theta[el.vertices[k]] * el.grad_lambda[k][0];
            g[1] += self.theta[el.vertices[k]] * el.grad_lambda[k][1];
        }
        g
    }

    /// Componentwise difference `self - other`.
    pub fn sub(&self, other: &FieldSolution) -> FieldSolution {
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect();
        FieldSolution {
            u: d(&self.u, &other.u),
            j: d(&self.j, &other.j),
            p: d(&self.p, &other.p),
            phi: d(&self.phi, &other.phi),
            theta: d(&self.theta, &other.theta),
        }
    }
}

/// Which discrete space an analytic function is interpolated into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarSpace {
    P1,
    P0,
}

/// Vertex values (P1) or centroid values (P0).
pub fn interpolate_scalar(mesh: &Mesh, space: ScalarSpace, f: &dyn Fn(Point) -> f64) -> Vec<f64> {
    match space {
        ScalarSpace::P1 => mesh.vertices.iter().map(|&p| f(p)).collect(),
        ScalarSpace::P0 => (0..mesh.num_triangles()).map(|t| f(mesh.centroid(t))).collect(),
    }
}

/// Mini interpolant: vertex values for both components, zero bubbles.
pub fn interpolate_velocity(sys: &FeSystem, f: &dyn Fn(Point) -> [f64; 2]) -> Vec<f64> {
    let m = sys.mesh();
    let n = sys.layout.n_scalar_u;
    let mut u = vec![0.0; 2 * n];
    for (v, &p) in m.vertices.iter().enumerate() {
        let val = f(p);
        u[v] = val[0];
        u[n + v] = val[1];
    }
    u
}

/// Canonical RT0 interpolant: each coefficient is the mean normal component of
/// `f` over the edge (global normal), computed with two-point Gauss.
pub fn interpolate_current(mesh: &Mesh, f: &dyn Fn(Point) -> [f64; 2]) -> Vec<f64> {
    (0..mesh.num_edges())
        .map(|e| {
            let [a, b] = mesh.edges[e];
            let (pa, pb) = (mesh.vertices[a], mesh.vertices[b]);
            let n = mesh.edge_normal(e);
            gauss_segment2()
                .iter()
                .map(|&(s, w)| {
                    let v = f([pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])]);
                    w * (v[0] * n[0] + v[1] * n[1])
                })
                .sum()
        })
        .collect()
}
