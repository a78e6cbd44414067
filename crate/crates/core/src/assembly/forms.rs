//! Element loops for every bilinear and trilinear form of the coupled system.
//!
//! Each `assemble_*` function appends its contribution to a [`Triplets`]
//! accumulator over the full DOF layout. Weak form conventions:
//!
//! * viscous term `Pr (grad u, grad v)`, magnetic term `kappa (J, K)`;
//! * Lorentz coupling `-kappa (J x B, v)` in the momentum rows and
//!   `+kappa (K x B, u)` in Ohm's law rows, with `J x B = (J2 B3, -J1 B3)`;
//! * constraints `-Pr (q, div v)` and `-kappa (psi, div K)`, used symmetrically;
//! * buoyancy `-Pr Ra (theta i, v)`;
//! * skew-symmetrised convection
//!   `c(w; u, v) = 1/2 ((w.grad) u, v) - 1/2 ((w.grad) v, u)` and the scalar
//!   analogue `h(w; theta, r)`.

use crate::assembly::config::ProblemConfig;
use crate::assembly::csr::Triplets;
use crate::fem::{quad_rule, Element, FeSystem, MiniBasis, QuadratureRule};
use crate::mesh::Point;

/// Basis data at one quadrature point of one element.
pub(crate) struct QuadPoint {
    pub w: f64,
    pub lam: [f64; 3],
    pub x: Point,
    pub mini: MiniBasis,
    pub rt: [Point; 3],
}

pub(crate) fn quad_points(el: &Element, rule: &QuadratureRule) -> Vec<QuadPoint> {
    rule.on(el.area)
        .map(|(lam, w)| {
            let (rt, _) = el.rt0_all(lam);
            QuadPoint { w, lam, x: el.point(lam), mini: el.mini(lam), rt }
        })
        .collect()
}

fn rule() -> QuadratureRule {
    quad_rule(6).expect("degree 6 rule")
}

/// Velocity (with bubble) and its gradient at a quadrature point.
fn velocity_and_grad(u: &[f64], dofs: &[usize; 8], b: &MiniBasis) -> (Point, [[f64; 2]; 2]) {
    let mut v = [0.0; 2];
    let mut g = [[0.0; 2]; 2];
    for k in 0..4 {
        let (cx, cy) = (u[dofs[k]], u[dofs[k + 4]]);
        v[0] += cx * b.values[k];
        v[1] += cy * b.values[k];
        for d in 0..2 {
            g[0][d] += cx * b.grads[k][d];
            g[1][d] += cy * b.grads[k][d];
        }
    }
    (v, g)
}

/// Velocity DOFs, relative to the start of the velocity block, for an element.
fn local_u(sys: &FeSystem, t: usize) -> [usize; 8] {
    sys.velocity_dofs(t).map(|d| d - sys.layout.u)
}

/// `Pr (grad u, grad v) + kappa (J, K) + d(J, v) - d(K, u)`.
pub fn assemble_a0(sys: &FeSystem, cfg: &ProblemConfig, out: &mut Triplets) {
    let rule = rule();
    let (pr, kappa, b3) = (cfg.pr, cfg.kappa, cfg.b3);
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let qp = quad_points(&el, &rule);
        let ud = sys.velocity_dofs(t);
        let jd = sys.current_dofs(t);

        let mut visc = [[0.0; 4]; 4];
        let mut mass_j = [[0.0; 3]; 3];
        // lorentz[k][a] = [int psi_k.x phi_a, int psi_k.y phi_a]
        let mut lorentz = [[[0.0; 2]; 4]; 3];
        for q in &qp {
            for a in 0..4 {
                for b in 0..4 {
                    visc[a][b] +=
                        q.w * (q.mini.grads[a][0] * q.mini.grads[b][0] + q.mini.grads[a][1] * q.mini.grads[b][1]);
                }
            }
            for k in 0..3 {
                for l in 0..3 {
                    mass_j[k][l] += q.w * (q.rt[k][0] * q.rt[l][0] + q.rt[k][1] * q.rt[l][1]);
                }
                for a in 0..4 {
                    lorentz[k][a][0] += q.w * q.rt[k][0] * q.mini.values[a];
                    lorentz[k][a][1] += q.w * q.rt[k][1] * q.mini.values[a];
                }
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                out.push(ud[a], ud[b], pr * visc[a][b]);
                out.push(ud[a + 4], ud[b + 4], pr * visc[a][b]);
            }
        }
        for k in 0..3 {
            for l in 0..3 {
                out.push(jd[k], jd[l], kappa * mass_j[k][l]);
            }
        }
        if b3 != 0.0 {
            let s = kappa * b3;
            for k in 0..3 {
                for a in 0..4 {
                    let [ix, iy] = lorentz[k][a];
                    // Momentum rows: -kappa (J x B, v) = -kappa B3 (J2 v1 - J1 v2).
                    out.push(ud[a], jd[k], -s * iy);
                    out.push(ud[a + 4], jd[k], s * ix);
                    // Ohm rows: kappa (K x B, u) = kappa B3 (K2 u1 - K1 u2).
                    out.push(jd[k], ud[a], s * iy);
                    out.push(jd[k], ud[a + 4], -s * ix);
                }
            }
        }
    }
}

/// Divergence constraints `-Pr (q, div v)`, `-kappa (psi, div K)` in both
/// orientations, plus one multiplier each for the pressure and (insulating
/// walls) potential constants.
pub fn assemble_b(sys: &FeSystem, cfg: &ProblemConfig, out: &mut Triplets) {
    let rule = rule();
    let l = sys.layout;
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let ud = sys.velocity_dofs(t);
        let pd = sys.pressure_dofs(t);
        let jd = sys.current_dofs(t);
        let phid = sys.potential_dof(t);

        // div_v[k][a] = [int lam_k d_x phi_a, int lam_k d_y phi_a]
        let mut div_v = [[[0.0; 2]; 4]; 3];
        for (lam, w) in rule.on(el.area) {
            let b = el.mini(lam);
            for k in 0..3 {
                for a in 0..4 {
                    div_v[k][a][0] += w * lam[k] * b.grads[a][0];
                    div_v[k][a][1] += w * lam[k] * b.grads[a][1];
                }
            }
        }
        for k in 0..3 {
            for a in 0..4 {
                for c in 0..2 {
                    let v = -cfg.pr * div_v[k][a][c];
                    out.push(pd[k], ud[a + 4 * c], v);
                    out.push(ud[a + 4 * c], pd[k], v);
                }
            }
        }
        for k in 0..3 {
            let div = 2.0 * el.edges[k].sign * el.edge_len[k] / (2.0 * el.area);
            let v = -cfg.kappa * div * el.area;
            out.push(phid, jd[k], v);
            out.push(jd[k], phid, v);
        }
        for &p in &pd {
            out.push(p, l.p_border, el.area / 3.0);
        }
        if let Some(border) = l.phi_border {
            out.push(phid, border, el.area);
        }
    }
    // The multiplier columns carry the mean weights; the constant itself is
    // fixed by a single-entry row and the mean removed after the solve. A
    // dense constraint row would make the fill-reducing ordering useless.
    out.push(l.p_border, l.p, 1.0);
    if let Some(border) = l.phi_border {
        out.push(border, l.phi, 1.0);
    }
}

/// Buoyancy `-Pr Ra (theta i, v)`: momentum rows, temperature columns.
pub fn assemble_q(sys: &FeSystem, cfg: &ProblemConfig, out: &mut Triplets) {
    if cfg.ra == 0.0 {
        return;
    }
    let rule = rule();
    let s = -cfg.pr * cfg.ra;
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let ud = sys.velocity_dofs(t);
        let td = sys.temperature_dofs(t);
        let mut m = [[0.0; 3]; 4];
        for (lam, w) in rule.on(el.area) {
            let b = el.mini(lam);
            for a in 0..4 {
                for k in 0..3 {
                    m[a][k] += w * b.values[a] * lam[k];
                }
            }
        }
        for (c, &dir) in cfg.buoyancy_dir.iter().enumerate() {
            if dir == 0.0 {
                continue;
            }
            for a in 0..4 {
                for k in 0..3 {
                    out.push(ud[a + 4 * c], td[k], s * dir * m[a][k]);
                }
            }
        }
    }
}

/// P1 stiffness `(grad theta, grad r)` on the temperature block.
pub fn assemble_diffusion_theta(sys: &FeSystem, out: &mut Triplets) {
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let td = sys.temperature_dofs(t);
        for k in 0..3 {
            for l in 0..3 {
                let g = &el.grad_lambda;
                out.push(td[k], td[l], el.area * (g[k][0] * g[l][0] + g[k][1] * g[l][1]));
            }
        }
    }
}

/// Which equation a convection operator acts in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvectionTarget {
    Momentum,
    Temperature,
}

/// Matrix of `c(w; ., .)` (momentum) or `h(w; ., .)` (temperature) for a
/// known advecting velocity `w` given as velocity-block coefficients. The
/// element matrices are antisymmetrised explicitly, so the global matrix is
/// exactly skew.
pub fn assemble_convection(sys: &FeSystem, w: &[f64], target: ConvectionTarget, out: &mut Triplets) {
    let rule = rule();
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let lu = local_u(sys, t);
        match target {
            ConvectionTarget::Momentum => {
                let ud = sys.velocity_dofs(t);
                let mut m = [[0.0; 4]; 4];
                for (lam, wq) in rule.on(el.area) {
                    let b = el.mini(lam);
                    let (wv, _) = velocity_and_grad(w, &lu, &b);
                    for bj in 0..4 {
                        let adv = wv[0] * b.grads[bj][0] + wv[1] * b.grads[bj][1];
                        for a in 0..4 {
                            m[a][bj] += 0.5 * wq * adv * b.values[a];
                        }
                    }
                }
                for a in 0..4 {
                    for bj in 0..4 {
                        let v = m[a][bj] - m[bj][a];
                        out.push(ud[a], ud[bj], v);
                        out.push(ud[a + 4], ud[bj + 4], v);
                    }
                }
            }
            ConvectionTarget::Temperature => {
                let td = sys.temperature_dofs(t);
                let mut m = [[0.0; 3]; 3];
                for (lam, wq) in rule.on(el.area) {
                    let b = el.mini(lam);
                    let (wv, _) = velocity_and_grad(w, &lu, &b);
                    for l in 0..3 {
                        let adv = wv[0] * el.grad_lambda[l][0] + wv[1] * el.grad_lambda[l][1];
                        for k in 0..3 {
                            m[k][l] += 0.5 * wq * adv * lam[k];
                        }
                    }
                }
                for k in 0..3 {
                    for l in 0..3 {
                        out.push(td[k], td[l], m[k][l] - m[l][k]);
                    }
                }
            }
        }
    }
}

/// Linearisation in the advecting argument: the matrix of `u -> c(u; w, v)`
/// (momentum rows, velocity columns) and of `u -> h(u; theta, r)` (temperature
/// rows, velocity columns), for known `w` and `theta`.
pub fn assemble_convection_advector(sys: &FeSystem, w: &[f64], theta: &[f64], out: &mut Triplets) {
    let rule = rule();
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let lu = local_u(sys, t);
        let ud = sys.velocity_dofs(t);
        let td = sys.temperature_dofs(t);
        let th = [0, 1, 2].map(|k| theta[el.vertices[k]]);
        let gth = [0, 1].map(|d| (0..3).map(|k| th[k] * el.grad_lambda[k][d]).sum::<f64>());
        // mom[d][a][c][b]: test phi_a e_d, trial phi_b e_c.
        let mut mom = [[[[0.0; 4]; 2]; 4]; 2];
        let mut tem = [[[0.0; 4]; 2]; 3];
        for (lam, wq) in rule.on(el.area) {
            let b = el.mini(lam);
            let (wv, wg) = velocity_and_grad(w, &lu, &b);
            let th_q: f64 = (0..3).map(|k| th[k] * lam[k]).sum();
            for bj in 0..4 {
                let pb = b.values[bj];
                for c in 0..2 {
                    for d in 0..2 {
                        for a in 0..4 {
                            mom[d][a][c][bj] += 0.5 * wq * pb * (wg[d][c] * b.values[a] - b.grads[a][c] * wv[d]);
                        }
                    }
                    for k in 0..3 {
                        tem[k][c][bj] += 0.5 * wq * pb * (gth[c] * lam[k] - el.grad_lambda[k][c] * th_q);
                    }
                }
            }
        }
        for d in 0..2 {
            for a in 0..4 {
                for c in 0..2 {
                    for bj in 0..4 {
                        out.push(ud[a + 4 * d], ud[bj + 4 * c], mom[d][a][c][bj]);
                    }
                }
            }
        }
        for k in 0..3 {
            for c in 0..2 {
                for bj in 0..4 {
                    out.push(td[k], ud[bj + 4 * c], tem[k][c][bj]);
                }
            }
        }
    }
}

/// Load vector `c(w1; w2, .)` on the velocity block or `h(w1; theta, .)` on
/// the temperature block, returned over the full layout. For the temperature
/// target `w2` holds temperature coefficients.
pub fn assemble_convection_load(sys: &FeSystem, w1: &[f64], w2: &[f64], target: ConvectionTarget) -> Vec<f64> {
    let rule = rule();
    let mut rhs = vec![0.0; sys.total()];
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let lu = local_u(sys, t);
        match target {
            ConvectionTarget::Momentum => {
                let ud = sys.velocity_dofs(t);
                for (lam, wq) in rule.on(el.area) {
                    let b = el.mini(lam);
                    let (a_v, _) = velocity_and_grad(w1, &lu, &b);
                    let (b_v, b_g) = velocity_and_grad(w2, &lu, &b);
                    // (w1.grad) w2
                    let adv = [a_v[0] * b_g[0][0] + a_v[1] * b_g[0][1], a_v[0] * b_g[1][0] + a_v[1] * b_g[1][1]];
                    for a in 0..4 {
                        let adv_test = a_v[0] * b.grads[a][0] + a_v[1] * b.grads[a][1];
                        for c in 0..2 {
                            rhs[ud[a + 4 * c]] += 0.5 * wq * (adv[c] * b.values[a] - adv_test * b_v[c]);
                        }
                    }
                }
            }
            ConvectionTarget::Temperature => {
                let td = sys.temperature_dofs(t);
                let th = [0, 1, 2].map(|k| w2[el.vertices[k]]);
                let gth = [0, 1].map(|d| (0..3).map(|k| th[k] * el.grad_lambda[k][d]).sum::<f64>());
                for (lam, wq) in rule.on(el.area) {
                    let b = el.mini(lam);
                    let (a_v, _) = velocity_and_grad(w1, &lu, &b);
                    let th_q: f64 = (0..3).map(|k| th[k] * lam[k]).sum();
                    let adv = a_v[0] * gth[0] + a_v[1] * gth[1];
                    for k in 0..3 {
                        let adv_test = a_v[0] * el.grad_lambda[k][0] + a_v[1] * el.grad_lambda[k][1];
                        rhs[td[k]] += 0.5 * wq * (adv * lam[k] - adv_test * th_q);
                    }
                }
            }
        }
    }
    rhs
}

/// `(f, v) + kappa (g, K)` and `(varphi, r)`; constraint and border rows stay zero.
pub fn assemble_loads(sys: &FeSystem, cfg: &ProblemConfig) -> Vec<f64> {
    let mut rhs = vec![0.0; sys.total()];
    if cfg.zero_sources {
        return rhs;
    }
    let rule = rule();
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let ud = sys.velocity_dofs(t);
        let jd = sys.current_dofs(t);
        let td = sys.temperature_dofs(t);
        for q in quad_points(&el, &rule) {
            let f = (cfg.force)(q.x);
            let g = (cfg.ohm_source)(q.x);
            let s = (cfg.heat_source)(q.x);
            for a in 0..4 {
                rhs[ud[a]] += q.w * f[0] * q.mini.values[a];
                rhs[ud[a + 4]] += q.w * f[1] * q.mini.values[a];
            }
            for k in 0..3 {
                rhs[jd[k]] += cfg.kappa * q.w * (g[0] * q.rt[k][0] + g[1] * q.rt[k][1]);
                rhs[td[k]] += q.w * s * q.lam[k];
            }
        }
    }
    rhs
}
