//! Run parameters: physical numbers, sources, boundary data and iteration controls.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::BoundaryMode;
use crate::mesh::{BoundaryTag, Point};

pub type ScalarFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

/// Nonlinear iteration used after the convection-free initial solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Convection lagged entirely onto the right-hand side.
    Stokes,
    /// Full linearisation of both convection terms.
    Newton,
    /// Convection with a lagged advecting velocity.
    Oseen,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Stokes, Method::Newton, Method::Oseen];

    pub fn name(self) -> &'static str {
        match self {
            Method::Stokes => "stokes",
            Method::Newton => "newton",
            Method::Oseen => "oseen",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "stokes" | "i" => Ok(Method::Stokes),
            "newton" | "ii" => Ok(Method::Newton),
            "oseen" | "iii" => Ok(Method::Oseen),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Which linear system to build: the convection-free start or one method step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linearization {
    Initial,
    Step(Method),
}

#[derive(Clone)]
pub struct ProblemConfig {
    /// Prandtl number.
    pub pr: f64,
    /// Rayleigh number.
    pub ra: f64,
    /// Coupling number.
    pub kappa: f64,
    /// Out-of-plane component of the applied magnetic field.
    pub b3: f64,
    /// Unit vector along which buoyancy acts.
    pub buoyancy_dir: [f64; 2],
    pub force: VectorFn,
    pub ohm_source: VectorFn,
    pub heat_source: ScalarFn,
    /// Velocity on the whole boundary.
    pub velocity_bc: VectorFn,
    /// Temperature on `temperature_walls`; the remaining walls are adiabatic.
    pub temperature_bc: ScalarFn,
    pub temperature_walls: Vec<BoundaryTag>,
    pub boundary_mode: BoundaryMode,
    pub method: Method,
    pub tol: f64,
    pub max_iter: usize,
    pub divergence_cap: f64,
    /// Whether the sources are known to vanish identically (lets assembly skip them).
    pub zero_sources: bool,
}

impl fmt::Debug for ProblemConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemConfig")
            .field("pr", &self.pr)
            .field("ra", &self.ra)
            .field("kappa", &self.kappa)
            .field("b3", &self.b3)
            .field("buoyancy_dir", &self.buoyancy_dir)
            .field("temperature_walls", &self.temperature_walls)
            .field("boundary_mode", &self.boundary_mode)
            .field("method", &self.method)
            .field("tol", &self.tol)
            .field("max_iter", &self.max_iter)
            .field("divergence_cap", &self.divergence_cap)
            .finish_non_exhaustive()
    }
}

impl Default for ProblemConfig {
    /// Unit parameters, zero sources, homogeneous Dirichlet data on every wall,
    /// insulating walls, Oseen iteration.
    fn default() -> Self {
        ProblemConfig {
            pr: 1.0,
            ra: 1.0,
            kappa: 1.0,
            b3: 1.0,
            buoyancy_dir: [0.0, 1.0],
            force: Arc::new(|_| [0.0, 0.0]),
            ohm_source: Arc::new(|_| [0.0, 0.0]),
            heat_source: Arc::new(|_| 0.0),
            velocity_bc: Arc::new(|_| [0.0, 0.0]),
            temperature_bc: Arc::new(|_| 0.0),
            temperature_walls: vec![
                BoundaryTag::Left,
                BoundaryTag::Right,
                BoundaryTag::Bottom,
                BoundaryTag::Top,
                BoundaryTag::Reentrant,
            ],
            boundary_mode: BoundaryMode::Insulating,
            method: Method::Oseen,
            tol: 1e-8,
            max_iter: 100,
            divergence_cap: 1e10,
            zero_sources: true,
        }
    }
}

impl ProblemConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.pr > 0.0 && self.pr.is_finite()) {
            return bad(format!("Pr must be positive, got {}", self.pr));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad(format!("kappa must be positive, got {}", self.kappa));
        }
        if !(self.ra >= 0.0 && self.ra.is_finite()) {
            return bad(format!("Ra must be non-negative, got {}", self.ra));
        }
        if !self.b3.is_finite() {
            return bad(format!("B3 must be finite, got {}", self.b3));
        }
        let [ix, iy] = self.buoyancy_dir;
        if ((ix * ix + iy * iy).sqrt() - 1.0).abs() > 1e-12 {
            return bad(format!("buoyancy direction must be a unit vector, got {:?}", self.buoyancy_dir));
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iter < 1 {
            return bad("max_iter must be at least 1".into());
        }
        if !(self.divergence_cap > 0.0) {
            return bad(format!("divergence cap must be positive, got {}", self.divergence_cap));
        }
        Ok(())
    }

    pub fn with_sources(mut self, force: VectorFn, ohm_source: VectorFn, heat_source: ScalarFn) -> Self {
        self.force = force;
        self.ohm_source = ohm_source;
        self.heat_source = heat_source;
        self.zero_sources = false;
        self
    }
}
