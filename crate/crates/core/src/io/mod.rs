//! File formats: VTK field output and flat configuration files.

pub mod config;
pub mod vtk;

pub use config::{parse_key_values, KeyValues};
pub use vtk::{parse_vtk, solution_grid, write_vtk, VtkArray, VtkGrid, VTK_TRIANGLE};
