//! Rotationally symmetric mean curvature flow of convex hypersurfaces in
//! turning-angle form, started from Angenent-oval slices, together with
//! numerical checks of the estimates satisfied by the resulting pancake
//! solutions.

pub mod cli;
pub mod error;
pub mod grid;
pub mod harness;
pub mod io;
pub mod oval;
pub mod profile;
pub mod record;
pub mod solver;

pub use error::{Error, Result};
pub use grid::TurningGrid;
pub use oval::{OvalTime, PlanePoint};
pub use profile::{Coordinates, DerivedFields, ProfileCurve, ReflectionVerdict};
pub use record::{Diagnostics, RunRecord, Snapshot, Termination};
pub use solver::{FlowState, SolverConfig};
