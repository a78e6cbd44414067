//! Charge-conservative mixed finite elements for the stationary, thermally
//! coupled inductionless MHD equations in two dimensions.
//!
//! Velocity and pressure use the Mini pair, the current density and electric
//! potential use lowest-order Raviart–Thomas with piecewise constants, and the
//! temperature uses continuous P1. The discrete current density is exactly
//! divergence free. The nonlinear system is solved by Stokes-, Newton- or
//! Oseen-type coupled iterations, each step being one monolithic sparse solve.

pub mod assembly;
pub mod bench;
pub mod cli;
pub mod error;
pub mod fem;
pub mod io;
pub mod iterate;
pub mod linsolve;
pub mod mesh;

pub use error::{Error, Result};
