//! Deformation varieties of ideally triangulated cusped 3-manifolds.
//!
//! Given an ideal triangulation this crate derives the hyperbolic gluing
//! equations and the Q-matching equations, enumerates the tropical ideal
//! points of the deformation variety together with their spun-normal surface
//! coordinates and boundary slopes, solves the gluing and completeness
//! equations numerically, and tracks degenerating paths of solutions toward
//! the tropical boundary.
//!
//! The `tropodegen` binary exposes the pipeline as subcommands; see the
//! crate README for usage.

pub mod cli;
pub mod equations;
pub mod exact;
pub mod fixtures;
pub mod geometry;
pub mod surfaces;
pub mod triangulation;
pub mod tropical;

pub use equations::{build_gluing_system, GluingSystem, ShapeAssignment};
pub use triangulation::{parse_triangulation, IdealTriangulation, PeripheralCurve};
pub use tropical::{enumerate_pf_vertices, QuadCoordinate, TropicalPoint};
