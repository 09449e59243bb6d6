//! Bases of discrete harmonic vector fields on tetrahedral meshes of domains
//! with cavities and tunnels, built on lowest-order Whitney forms.

pub mod complex;
mod error;
pub mod harmonic_normal;
pub mod harmonic_tangent;
pub mod io;
pub mod meshgen;
pub mod solvers;
pub mod topology;

pub use error::{Error, Result};
