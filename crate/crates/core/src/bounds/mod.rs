//! Assembly of the two-sided bounds: product bounds `β`, polytope bounds
//! `α`, verdicts, and the admissible dwell-time gate.

mod analysis;
mod fibrillation;
mod tau;

use thiserror::Error;

use crate::family::FamilyError;
use crate::linalg::LinalgError;
use crate::lp::LpError;
use crate::products::ProductError;

pub use analysis::{
    analyze_stability, analyze_stabilizability, beta_from_candidate, Analysis, AnalysisConfig, AnalysisMode,
    BoundsMode, LyapunovBounds, Verdict,
};
pub use fibrillation::{fibrillation_scan, FibrillationReport, FibrillationRow};
pub use tau::{admissible_tau, nearest_admissible_tau, DEFAULT_TAU_DELTA};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dwell time {0} is outside (0, 2]")]
    TauOutOfRange(f64),
    #[error("dwell time {tau} is not admissible{}", match .nearest { Some(t) => format!("; nearest admissible value is {t}"), None => String::new() })]
    InadmissibleTau { tau: f64, nearest: Option<f64> },
    #[error("stabilizability analysis requires every matrix to be Metzler")]
    NotMetzler,
    #[error("product search: {0}")]
    Products(#[from] ProductError),
    #[error("linear algebra: {0}")]
    Linalg(#[from] LinalgError),
    #[error("linear programming: {0}")]
    Lp(#[from] LpError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}
