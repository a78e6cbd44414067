//! Buoyancy-driven benchmark configurations without exact solutions.

use std::sync::Arc;

use crate::assembly::{Method, ProblemConfig};
use crate::error::{Error, Result};
use crate::fem::BoundaryMode;
use crate::mesh::{build_structured_rect, BoundaryTag, Mesh};

/// Bottom-wall temperature of the layer problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heating {
    Uniform,
    /// `theta = sin(x / 5)` along the bottom.
    Sinusoidal,
}

impl std::str::FromStr for Heating {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(Heating::Uniform),
            "sinusoidal" | "sin" => Ok(Heating::Sinusoidal),
            other => Err(Error::InvalidConfig(format!("unknown heating `{other}`"))),
        }
    }
}

fn check_ra(ra: f64) -> Result<()> {
    if ra > 0.0 && ra.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("Ra must be positive, got {ra}")))
    }
}

/// Differentially heated unit square: hot left wall, cold right wall,
/// adiabatic top and bottom, no-slip everywhere, Newton iteration.
pub fn cavity_setup(ra: f64) -> Result<ProblemConfig> {
    check_ra(ra)?;
    Ok(ProblemConfig {
        pr: 0.71,
        ra,
        kappa: 1.0,
        b3: 1.0,
        temperature_bc: Arc::new(|p| if p[0] < 0.5 { 1.0 } else { 0.0 }),
        temperature_walls: vec![BoundaryTag::Left, BoundaryTag::Right],
        boundary_mode: BoundaryMode::Insulating,
        method: Method::Newton,
        ..ProblemConfig::default()
    })
}

pub fn cavity_mesh(n: usize) -> Result<Mesh> {
    build_structured_rect(n, n, [[0.0, 1.0], [0.0, 1.0]])
}

/// Fluid layer `[0,5] x [0,1]` heated from below, cold top, adiabatic sides,
/// no-slip everywhere, Oseen iteration.
pub fn benard_setup(ra: f64, heating: Heating) -> Result<ProblemConfig> {
    check_ra(ra)?;
    let bottom: Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync> = match heating {
        Heating::Uniform => Arc::new(|_| 1.0),
        Heating::Sinusoidal => Arc::new(|p| (p[0] / 5.0).sin()),
    };
    Ok(ProblemConfig {
        pr: 1.0,
        ra,
        kappa: 1.0,
        b3: 1.0,
        temperature_bc: Arc::new(move |p| if p[1] < 0.5 { bottom(p) } else { 0.0 }),
        temperature_walls: vec![BoundaryTag::Bottom, BoundaryTag::Top],
        boundary_mode: BoundaryMode::Insulating,
        method: Method::Oseen,
        ..ProblemConfig::default()
    })
}

/// `5n x n` cells on the layer.
pub fn benard_mesh(n: usize) -> Result<Mesh> {
    build_structured_rect(5 * n, n, [[0.0, 5.0], [0.0, 1.0]])
}
