//! Embedded linear programming: the simplex core, hull-membership gauges,
//! and the `α` optimizations built on them.

mod alpha;
mod hull;
mod simplex;

use thiserror::Error;

use crate::polytope::HullKind;

pub use alpha::{
    alpha_at, alpha_lower_infinite, alpha_upper, AlphaEstimate, DEFAULT_DELTA, DELTA_AGREEMENT,
};
pub use hull::{membership_infinite, membership_monotone, membership_sym};
pub use simplex::{primal_residual, solve_lp, LpProblem, LpSolution, LpStatus, TOL_LP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite coefficient in linear program")]
    NonFinite,
    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),
    #[error("alpha LP infeasible for matrix {matrix}, vertex {vertex}: the Euler step leaves the span of the polytope")]
    AlphaInfeasible { matrix: usize, vertex: usize },
    #[error("alpha LP unbounded")]
    Unbounded,
    #[error("step size must be positive and finite, got {0}")]
    InvalidDelta(f64),
    #[error("operation not defined for {0} hulls")]
    WrongHull(HullKind),
}
