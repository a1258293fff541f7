//! Dense real linear algebra used by the rest of the crate.

mod eigen;
mod expm;
mod matrix;
mod structure;

use thiserror::Error;

pub use eigen::{
    eig_full, eigenvector, real_leading_vector, spectral_abscissa, spectral_radius, Spectrum,
    TOL_EIG,
};
pub use expm::mat_exp;
pub use matrix::Matrix;
pub use structure::{is_metzler, orbit_span_dimension, positive_irreducible, TOL_RANK, TOL_ZERO};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix must have at least one row")]
    Empty,
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("non-finite scalar argument {0}")]
    NonFiniteScalar(f64),
    #[error("matrix exponential overflowed")]
    Overflow,
    #[error("singular linear system")]
    Singular,
    #[error("QR iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("eigenvector refinement failed (residual {residual:e})")]
    EigenvectorFailed { residual: f64 },
}
