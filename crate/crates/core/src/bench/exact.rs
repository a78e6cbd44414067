//! Closed-form solutions with manufactured sources.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::assembly::{Method, ProblemConfig};
use crate::bench::jet::{polar, Jet};
use crate::error::Result;
use crate::fem::BoundaryMode;
use crate::mesh::{build_lshape, build_structured_rect, BoundaryTag, Mesh, Point};

/// All exact fields at one point, with derivatives.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExactFields {
    pub u: [Jet; 2],
    pub p: Jet,
    pub j: [Jet; 2],
    pub phi: Jet,
    pub theta: Jet,
}

impl ExactFields {
    pub fn velocity(&self) -> [f64; 2] {
        [self.u[0].v, self.u[1].v]
    }

    pub fn velocity_grad(&self) -> [[f64; 2]; 2] {
        [self.u[0].grad(), self.u[1].grad()]
    }

    pub fn current(&self) -> [f64; 2] {
        [self.j[0].v, self.j[1].v]
    }

    pub fn current_div(&self) -> f64 {
        self.j[0].dx + self.j[1].dy
    }
}

type FieldFn = Arc<dyn Fn(Point) -> ExactFields + Send + Sync>;

/// Which mesh family an exact solution lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactDomain {
    UnitSquare,
    LShape,
}

#[derive(Clone)]
pub struct ExactSolution {
    pub name: &'static str,
    pub pr: f64,
    pub ra: f64,
    pub kappa: f64,
    pub b3: f64,
    pub buoyancy_dir: [f64; 2],
    pub mode: BoundaryMode,
    pub domain: ExactDomain,
    fields: FieldFn,
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExactSolution")
            .field("name", &self.name)
            .field("pr", &self.pr)
            .field("ra", &self.ra)
            .field("kappa", &self.kappa)
            .field("b3", &self.b3)
            .field("mode", &self.mode)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl ExactSolution {
    pub fn at(&self, p: Point) -> ExactFields {
        (self.fields)(p)
    }

    /// Momentum source `-Pr lap u + (u.grad) u + Pr grad p - kappa J x B - Pr Ra theta i`.
    pub fn force(&self, x: Point) -> [f64; 2] {
        let e = self.at(x);
        let u = e.velocity();
        let jxb = [e.j[1].v * self.b3, -e.j[0].v * self.b3];
        let grad_p = e.p.grad();
        [0, 1].map(|c| {
            let uc = &e.u[c];
            -self.pr * uc.laplacian() + u[0] * uc.dx + u[1] * uc.dy + self.pr * grad_p[c]
                - self.kappa * jxb[c]
                - self.pr * self.ra * e.theta.v * self.buoyancy_dir[c]
        })
    }

    /// Ohm's law source `J + grad phi - u x B`.
    pub fn ohm_source(&self, x: Point) -> [f64; 2] {
        let e = self.at(x);
        let uxb = [e.u[1].v * self.b3, -e.u[0].v * self.b3];
        let gp = e.phi.grad();
        [e.j[0].v + gp[0] - uxb[0], e.j[1].v + gp[1] - uxb[1]]
    }

    /// Heat source `-lap theta + u.grad theta`.
    pub fn heat_source(&self, x: Point) -> f64 {
        let e = self.at(x);
        -e.theta.laplacian() + e.u[0].v * e.theta.dx + e.u[1].v * e.theta.dy
    }

    pub fn mesh(&self, n: usize) -> Result<Mesh> {
        match self.domain {
            ExactDomain::UnitSquare => build_structured_rect(n, n, [[0.0, 1.0], [0.0, 1.0]]),
            ExactDomain::LShape => build_lshape(n),
        }
    }

    /// Same fields with different physical numbers; sources follow automatically.
    pub fn with_params(mut self, pr: f64, ra: f64, kappa: f64, b3: f64) -> Self {
        self.pr = pr;
        self.ra = ra;
        self.kappa = kappa;
        self.b3 = b3;
        self
    }

    /// Run configuration with the manufactured sources and exact Dirichlet traces.
    pub fn config(&self, method: Method) -> ProblemConfig {
        let (a, b, c) = (self.clone(), self.clone(), self.clone());
        let (bu, bt) = (self.clone(), self.clone());
        ProblemConfig {
            pr: self.pr,
            ra: self.ra,
            kappa: self.kappa,
            b3: self.b3,
            buoyancy_dir: self.buoyancy_dir,
            velocity_bc: Arc::new(move |p| bu.at(p).velocity()),
            temperature_bc: Arc::new(move |p| bt.at(p).theta.v),
            temperature_walls: vec![
                BoundaryTag::Left,
                BoundaryTag::Right,
                BoundaryTag::Bottom,
                BoundaryTag::Top,
                BoundaryTag::Reentrant,
            ],
            boundary_mode: self.mode,
            method,
            ..ProblemConfig::default()
        }
        .with_sources(
            Arc::new(move |p| a.force(p)),
            Arc::new(move |p| b.ohm_source(p)),
            Arc::new(move |p| c.heat_source(p)),
        )
    }
}

/// Smooth solution on the unit square with insulating walls. Velocity and
/// temperature vanish on the boundary; the current is the curl of
/// `sin(pi x) sin(pi y) / 20`, so it is solenoidal with zero normal trace.
pub fn manufactured_smooth_2d() -> ExactSolution {
    let fields = |q: Point| {
        let (x, y) = (Jet::x(q[0]), Jet::y(q[1]));
        let (sx, cx) = ((x * PI).sin(), (x * PI).cos());
        let (sy, cy) = ((y * PI).sin(), (y * PI).cos());
        let u1 = 2.0 * PI * sx * sx * cy * sy;
        let u2 = -2.0 * PI * sy * sy * cx * sx;
        ExactFields {
            u: [u1, u2],
            p: cx * cy,
            j: [(sx * cy) * (PI / 20.0), -(cx * sy) * (PI / 20.0)],
            phi: x - 0.5,
            theta: u1 + u2,
        }
    };
    ExactSolution {
        name: "smooth",
        pr: 1.0,
        ra: 1.0,
        kappa: 1.0,
        b3: 1.0,
        buoyancy_dir: [0.0, 1.0],
        mode: BoundaryMode::Insulating,
        domain: ExactDomain::UnitSquare,
        fields: Arc::new(fields),
    }
}

/// Smallest positive root of `-mu + sin(3 pi mu / 2) = 0`, by bisection.
pub fn corner_exponent() -> f64 {
    let f = |m: f64| -m + (1.5 * PI * m).sin();
    let (mut lo, mut hi) = (0.1, 1.0);
    debug_assert!(f(lo) > 0.0 && f(hi) < 0.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `d^k/dt^k` of `sin(c t)` (or `cos(c t)`) evaluated on the jet `t`.
fn trig_derivative(c: f64, t: Jet, k: u32, sine: bool) -> Jet {
    let shifted = t * c + (k as f64) * PI / 2.0;
    let base = if sine { shifted.sin() } else { shifted.cos() };
    base * c.powi(k as i32)
}

/// Singular corner solution on the L-shaped domain with conducting walls.
/// Velocity and pressure form the classical Stokes corner singularity, the
/// current is the gradient of the harmonic `r^{2/3} sin(2 angle / 3)`, and
/// the potential vanishes.
pub fn lshape_singular() -> ExactSolution {
    let mu = corner_exponent();
    let alpha = 1.5 * PI;
    let ca = (mu * alpha).cos();
    let fields = move |q: Point| {
        if q[0] == 0.0 && q[1] == 0.0 {
            return ExactFields::default();
        }
        let (r, t) = polar(q[0], q[1]);
        // k-th derivative of R.
        let rd = |k: u32| {
            trig_derivative(1.0 + mu, t, k, true) * (ca / (1.0 + mu))
                - trig_derivative(1.0 + mu, t, k, false)
                - trig_derivative(1.0 - mu, t, k, true) * (ca / (1.0 - mu))
                + trig_derivative(1.0 - mu, t, k, false)
        };
        let (r0, r1, r3) = (rd(0), rd(1), rd(3));
        let (st, ct) = (t.sin(), t.cos());
        let rm = r.powf(mu);
        let u1 = rm * (st * r0 * (1.0 + mu) + ct * r1);
        let u2 = rm * (st * r1 - ct * r0 * (1.0 + mu));
        let p = -(r.powf(mu - 1.0) * (r1 * (1.0 + mu).powi(2) + r3)) * (1.0 / (1.0 - mu));
        let rj = r.powf(-1.0 / 3.0) * (2.0 / 3.0);
        let t3 = t * (1.0 / 3.0);
        ExactFields { u: [u1, u2], p, j: [-(rj * t3.sin()), rj * t3.cos()], phi: Jet::constant(0.0), theta: u1 + u2 }
    };
    ExactSolution {
        name: "lshape",
        pr: 1.0,
        ra: 1.0,
        kappa: 1.0,
        b3: 1.0,
        buoyancy_dir: [0.0, 1.0],
        mode: BoundaryMode::Conducting,
        domain: ExactDomain::LShape,
        fields: Arc::new(fields),
    }
}
