//! Benchmark problems, error measurement and refinement studies.

pub mod errors;
pub mod exact;
pub mod jet;
pub mod profiles;
pub mod setups;
pub mod study;

pub use errors::{error_norms, ErrorReport};
pub use exact::{corner_exponent, lshape_singular, manufactured_smooth_2d, ExactDomain, ExactFields, ExactSolution};
pub use jet::{polar, Jet};
pub use profiles::{midline_profiles, profiles_csv, Profiles, PROFILE_POINTS};
pub use setups::{benard_mesh, benard_setup, cavity_mesh, cavity_setup, Heating};
pub use study::{convergence_study, convergence_study_with, StudyLevel, StudyTable, STUDY_HEADER};
