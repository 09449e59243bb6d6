//! Mesh files, reports, VTK export and the command-line driver.

mod cli;
pub mod mesh_file;
pub mod pipeline;
pub mod report;
pub mod vtk;

pub use cli::run_cli;
pub use mesh_file::{load_mesh, read_mesh, save_mesh, write_cochain, write_mesh};
pub use pipeline::{run_verification, VerificationRun, VerifyConfig};
pub use report::{parse_key_values, Check, VerificationReport};
pub use vtk::{export_vtk, write_vtk};
