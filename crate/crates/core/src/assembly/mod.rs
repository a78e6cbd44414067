//! Global assembly: sparse storage, run configuration, weak forms and boundary elimination.

pub mod config;
pub mod csr;
pub mod forms;
pub mod system;

pub use config::{Linearization, Method, ProblemConfig, ScalarFn, VectorFn};
pub use csr::{CsrMatrix, Triplets};
pub use forms::ConvectionTarget;
pub use system::{apply_essential_bc, build_method_system, LinearSystem, SystemAssembler};
