//! Finite element spaces: quadrature, local bases, DOF layout, interpolation and norms.

pub mod basis;
pub mod norms;
pub mod quadrature;
pub mod space;

pub use basis::{eval_rt0_basis, eval_velocity_basis, Element, MiniBasis};
pub use norms::{divergence_l2, field_norms, potential_integral, pressure_integral, remove_means, FieldNorms};
pub use quadrature::{quad_rule, QuadratureRule};
pub use space::{
    interpolate_current, interpolate_scalar, interpolate_velocity, BoundaryMode, FeSystem, FieldSolution, Layout,
    ScalarSpace,
};
