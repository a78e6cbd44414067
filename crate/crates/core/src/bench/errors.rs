//! Discretisation errors against closed-form solutions.

use crate::bench::exact::ExactSolution;
use crate::fem::{divergence_l2, quad_rule, BoundaryMode, FeSystem, FieldSolution};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub h: f64,
    pub err_u_h1: f64,
    pub err_p_l2: f64,
    pub err_j_div: f64,
    pub err_phi_l2: f64,
    pub err_theta_h1: f64,
    pub div_j: f64,
    pub iterations: usize,
    pub seconds: f64,
}

impl ErrorReport {
    pub fn is_finite(&self) -> bool {
        [self.err_u_h1, self.err_p_l2, self.err_j_div, self.err_phi_l2, self.err_theta_h1, self.div_j]
            .iter()
            .all(|v| v.is_finite() && *v >= 0.0)
    }
}

/// `|grad(u - u_h)|_0`, `|p - p_h|_0`, `|J - J_h|_div`, `|phi - phi_h|_0`,
/// `|grad(theta - theta_h)|_0` and `|div J_h|_0`. The pressure is compared
/// after removing each side's mean, and so is the potential when it is only
/// determined up to a constant (insulating walls).
pub fn error_norms(s: &FieldSolution, exact: &ExactSolution, sys: &FeSystem) -> ErrorReport {
    let rule = quad_rule(6).expect("degree 6 rule");
    let mesh = sys.mesh();
    let area = mesh.domain.area();
    let shift_phi = sys.mode() == BoundaryMode::Insulating;

    // Means first.
    let (mut p_mean, mut ph_mean, mut phi_mean, mut phih_mean) = (0.0, 0.0, 0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let el = sys.element(t);
        for (lam, w) in rule.on(el.area) {
            let e = exact.at(el.point(lam));
            p_mean += w * e.p.v;
            ph_mean += w * s.pressure_at(&el, lam);
            phi_mean += w * e.phi.v;
        }
        phih_mean += el.area * s.phi[t];
    }
    let p_shift = (p_mean - ph_mean) / area;
    let phi_shift = if shift_phi { (phi_mean - phih_mean) / area } else { 0.0 };

    let mut acc = [0.0; 6];
    for t in 0..mesh.num_triangles() {
        let el = sys.element(t);
        let div_h = s.current_div(&el);
        let gth = s.temperature_grad(&el);
        for (lam, w) in rule.on(el.area) {
            let e = exact.at(el.point(lam));
            let gu = s.velocity_grad_at(sys, &el, lam);
            let ge = e.velocity_grad();
            for c in 0..2 {
                for d in 0..2 {
                    acc[0] += w * (ge[c][d] - gu[c][d]).powi(2);
                }
            }
            acc[1] += w * (e.p.v - s.pressure_at(&el, lam) - p_shift).powi(2);
            let (jh, _) = s.current_at(&el, lam);
            let je = e.current();
            acc[2] += w * ((je[0] - jh[0]).powi(2) + (je[1] - jh[1]).powi(2));
            acc[3] += w * (e.current_div() - div_h).powi(2);
            acc[4] += w * (e.phi.v - s.phi[t] - phi_shift).powi(2);
            acc[5] += w * ((e.theta.dx - gth[0]).powi(2) + (e.theta.dy - gth[1]).powi(2));
        }
    }
    ErrorReport {
        h: mesh.h,
        err_u_h1: acc[0].sqrt(),
        err_p_l2: acc[1].sqrt(),
        err_j_div: (acc[2] + acc[3]).sqrt(),
        err_phi_l2: acc[4].sqrt(),
        err_theta_h1: acc[5].sqrt(),
        div_j: divergence_l2(sys, s),
        iterations: 0,
        seconds: 0.0,
    }
}
