//! Discrete norms of finite element fields.

use crate::fem::quadrature::quad_rule;
use crate::fem::space::{BoundaryMode, FeSystem, FieldSolution};

/// Natural norms of one set of fields.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FieldNorms {
    /// `|grad u|_0`, bubbles included.
    pub u_h1: f64,
    pub j_l2: f64,
    pub j_div: f64,
    pub p_l2: f64,
    pub phi_l2: f64,
    /// `|grad theta|_0`.
    pub theta_h1: f64,
    /// `|div J|_0`.
    pub div_j: f64,
}

impl FieldNorms {
    /// `|grad u|_0 + |J|_div`, the energy norm of the (u, J) pair.
    pub fn energy(&self) -> f64 {
        self.u_h1 + self.j_div
    }

    pub fn is_finite(&self) -> bool {
        [self.u_h1, self.j_div, self.p_l2, self.phi_l2, self.theta_h1, self.div_j].iter().all(|v| v.is_finite())
    }

    pub fn max(&self) -> f64 {
        [self.u_h1, self.j_div, self.p_l2, self.phi_l2, self.theta_h1].into_iter().fold(0.0, f64::max)
    }
}

pub fn field_norms(sys: &FeSystem, s: &FieldSolution) -> FieldNorms {
    let rule = quad_rule(6).expect("degree 6 rule");
    let mut acc = [0.0; 6];
    for t in 0..sys.mesh().num_triangles() {
        let el = sys.element(t);
        let div = s.current_div(&el);
        acc[5] += el.area * div * div;
        acc[4] += el.area * s.phi[t] * s.phi[t];
        let gt = s.temperature_grad(&el);
        acc[3] += el.area * (gt[0] * gt[0] + gt[1] * gt[1]);
        for (lam, w) in rule.on(el.area) {
            let g = s.velocity_grad_at(sys, &el, lam);
            acc[0] += w * (g[0][0].powi(2) + g[0][1].powi(2) + g[1][0].powi(2) + g[1][1].powi(2));
            let (jv, _) = s.current_at(&el, lam);
            acc[1] += w * (jv[0] * jv[0] + jv[1] * jv[1]);
            acc[2] += w * s.pressure_at(&el, lam).powi(2);
        }
    }
    FieldNorms {
        u_h1: acc[0].sqrt(),
        j_l2: acc[1].sqrt(),
        j_div: (acc[1] + acc[5]).sqrt(),
        p_l2: acc[2].sqrt(),
        phi_l2: acc[4].sqrt(),
        theta_h1: acc[3].sqrt(),
        div_j: acc[5].sqrt(),
    }
}

/// `|div J_h|_0` from the per-cell constant divergences.
pub fn divergence_l2(sys: &FeSystem, s: &FieldSolution) -> f64 {
    (0..sys.mesh().num_triangles())
        .map(|t| {
            let el = sys.element(t);
            el.area * s.current_div(&el).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// `int p_h` over the domain.
pub fn pressure_integral(sys: &FeSystem, s: &FieldSolution) -> f64 {
    (0..sys.mesh().num_triangles())
        .map(|t| {
            let el = sys.element(t);
            el.area * (0..3).map(|k| s.p[el.vertices[k]]).sum::<f64>() / 3.0
        })
        .sum()
}

/// `int phi_h` over the domain.
pub fn potential_integral(sys: &FeSystem, s: &FieldSolution) -> f64 {
    (0..sys.mesh().num_triangles()).map(|t| sys.mesh().area(t) * s.phi[t]).sum()
}

/// Shifts the pressure, and the potential on insulating walls, to zero mean.
pub fn remove_means(sys: &FeSystem, s: &mut FieldSolution) {
    let area: f64 = (0..sys.mesh().num_triangles()).map(|t| sys.mesh().area(t)).sum();
    let c = pressure_integral(sys, s) / area;
    s.p.iter_mut().for_each(|p| *p -= c);
    if sys.mode() == BoundaryMode::Insulating {
        let c = potential_integral(sys, s) / area;
        s.phi.iter_mut().for_each(|p| *p -= c);
    }
}
