//! Vertex-described polytopes and the invariant-polytope builder.

mod build;
mod types;

pub use build::{build, verify_invariance, BuildCaps, BuildReport, TOL_ADD, TOL_DUPLICATE};
pub use types::{HullKind, Polytope, PolytopeFormatError};
