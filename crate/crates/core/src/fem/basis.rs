//! Local shape functions on affine triangles.
//!
//! Velocity uses the Mini element: three vertex hats plus the cubic bubble
//! `27 l0 l1 l2`, normalised to 1 at the centroid, for each component. The
//! current density uses lowest-order Raviart–Thomas functions defined directly
//! in physical coordinates,
//! `phi_e(x) = sign_e |e| / (2|T|) (x - p_opp)`, whose normal component on
//! edge `e` (global normal) equals 1.

use crate::error::{Error, Result};
use crate::mesh::{EdgeRef, Mesh, Point};

/// Geometry of one triangle, precomputed once per element visit.
#[derive(Clone, Debug)]
pub struct Element {
    pub index: usize,
    pub vertices: [usize; 3],
    pub coords: [Point; 3],
    pub area: f64,
    /// Constant gradients of the barycentric coordinates.
    pub grad_lambda: [[f64; 2]; 3],
    pub edges: [EdgeRef; 3],
    pub edge_len: [f64; 3],
}

impl Element {
    pub fn new(mesh: &Mesh, t: usize) -> Result<Self> {
        let coords = mesh.tri_coords(t);
        let area = crate::mesh::signed_area(coords);
        if !(area > 0.0) {
            return Err(Error::DegenerateTriangle(t));
        }
        let mut grad_lambda = [[0.0; 2]; 3];
        for k in 0..3 {
            let a = coords[(k + 1) % 3];
            let b = coords[(k + 2) % 3];
            // Inward normal of the opposite edge scaled by |e| / (2|T|).
            grad_lambda[k] = [(a[1] - b[1]) / (2.0 * area), (b[0] - a[0]) / (2.0 * area)];
        }
        let edge_len = [0, 1, 2].map(|k| crate::mesh::dist(coords[(k + 1) % 3], coords[(k + 2) % 3]));
        Ok(Element {
            index: t,
            vertices: mesh.triangles[t],
            coords,
            area,
            grad_lambda,
            edges: mesh.tri_edges[t],
            edge_len,
        })
    }

    pub fn point(&self, lam: [f64; 3]) -> Point {
        let c = &self.coords;
        [lam[0] * c[0][0] + lam[1] * c[1][0] + lam[2] * c[2][0], lam[0] * c[0][1] + lam[1] * c[1][1] + lam[2] * c[2][1]]
    }

    /// RT0 function of local edge `slot` at barycentric point `lam`: value and divergence.
    pub fn rt0(&self, slot: usize, lam: [f64; 3]) -> (Point, f64) {
        let x = self.point(lam);
        let opp = self.coords[slot];
        let s = self.edges[slot].sign * self.edge_len[slot] / (2.0 * self.area);
        ([s * (x[0] - opp[0]), s * (x[1] - opp[1])], 2.0 * s)
    }

    /// All three RT0 functions at `lam`.
    pub fn rt0_all(&self, lam: [f64; 3]) -> ([Point; 3], [f64; 3]) {
        let mut vals = [[0.0; 2]; 3];
        let mut divs = [0.0; 3];
        for k in 0..3 {
            let (v, d) = self.rt0(k, lam);
            vals[k] = v;
            divs[k] = d;
        }
        (vals, divs)
    }

    pub fn mini(&self, lam: [f64; 3]) -> MiniBasis {
        eval_velocity_basis(self, lam)
    }
}

/// Scalar Mini basis at one point: entries 0..3 are the vertex hats, entry 3 the bubble.
#[derive(Clone, Copy, Debug)]
pub struct MiniBasis {
    pub values: [f64; 4],
    pub grads: [[f64; 2]; 4],
}

/// Values and physical gradients of the scalar Mini basis. The velocity space
/// uses this basis once per component, giving eight vector shape functions.
pub fn eval_velocity_basis(el: &Element, lam: [f64; 3]) -> MiniBasis {
    let g = &el.grad_lambda;
    let b = 27.0 * lam[0] * lam[1] * lam[2];
    let c = [27.0 * lam[1] * lam[2], 27.0 * lam[0] * lam[2], 27.0 * lam[0] * lam[1]];
    MiniBasis {
        values: [lam[0], lam[1], lam[2], b],
        grads: [
            g[0],
            g[1],
            g[2],
            [c[0] * g[0][0] + c[1] * g[1][0] + c[2] * g[2][0], c[0] * g[0][1] + c[1] * g[1][1] + c[2] * g[2][1]],
        ],
    }
}

/// RT0 value and divergence for local edge `slot` of triangle `t`.
pub fn eval_rt0_basis(mesh: &Mesh, t: usize, slot: usize, lam: [f64; 3]) -> Result<(Point, f64)> {
    Ok(Element::new(mesh, t)?.rt0(slot, lam))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::quadrature::gauss_segment2;
    use crate::mesh::build_structured_rect;

    fn right_triangle_mesh() -> Mesh {
        build_structured_rect(1, 1, [[0.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn bubble_normalisation() {
        let m = right_triangle_mesh();
        let el = Element::new(&m, 0).unwrap();
        let b = el.mini([1.0 / 3.0; 3]);
        assert!((b.values[3] - 1.0).abs() < 1e-15);
        for lam in [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]] {
            assert_eq!(el.mini(lam).values[3], 0.0);
        }
    }

    #[test]
    fn hats_partition_unity() {
        let m = build_structured_rect(3, 2, [[0.0, 2.0], [-1.0, 0.5]]).unwrap();
        for t in 0..m.num_triangles() {
            let el = Element::new(&m, t).unwrap();
            for lam in [[0.2, 0.3, 0.5], [0.9, 0.05, 0.05], [1.0, 0.0, 0.0]] {
                let b = el.mini(lam);
                assert!((b.values[..3].iter().sum::<f64>() - 1.0).abs() < 1e-15);
                let gs = [0, 1].map(|d| b.grads[..3].iter().map(|g| g[d]).sum::<f64>());
                assert!(gs[0].abs() < 1e-13 && gs[1].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rt0_normal_traces() {
        let m = build_structured_rect(2, 3, [[0.0, 1.0], [0.0, 1.0]]).unwrap();
        for t in 0..m.num_triangles() {
            let el = Element::new(&m, t).unwrap();
            for k in 0..3 {
                for j in 0..3 {
                    let e = el.edges[j].edge;
                    let n = m.edge_normal(e);
                    let (a, b) = (el.coords[(j + 1) % 3], el.coords[(j + 2) % 3]);
                    let mut flux = 0.0;
                    for (s, w) in gauss_segment2() {
                        let x = [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])];
                        let lam = crate::mesh::barycentric(el.coords, x);
                        let (v, _) = el.rt0(k, lam);
                        flux += w * el.edge_len[j] * (v[0] * n[0] + v[1] * n[1]);
                    }
                    let expected = if j == k { el.edge_len[k] } else { 0.0 };
                    assert!((flux - expected).abs() < 1e-14, "t={t} k={k} j={j}");
                }
            }
        }
    }

    #[test]
    fn rt0_divergence_on_unit_right_triangle() {
        let m = right_triangle_mesh();
        // Triangle 0 is (0,0),(1,0),(1,1); build the reference one explicitly instead.
        let mut mesh = m.clone();
        mesh.vertices = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        mesh.triangles = vec![[0, 1, 2], [1, 3, 2]];
        mesh.tri_edges[0][0].sign = 1.0;
        let el = Element::new(&mesh, 0).unwrap();
        let (_, div) = el.rt0(0, [0.2, 0.3, 0.5]);
        assert!((div - 2.0 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_element_rejected() {
        let mut m = right_triangle_mesh();
        m.vertices[3] = m.vertices[0];
        assert!(matches!(Element::new(&m, 0), Err(Error::DegenerateTriangle(0))));
    }
}
