use serde::{Deserialize, Serialize};

use super::{AnalysisConfig, BoundsError};
use crate::family::MatrixFamily;
use crate::linalg::{spectral_radius, Matrix};
use crate::products::{render_word, search_candidate, SearchMode, SearchOptions};

const TRANSPOSE_TOL: f64 = 1e-12;
const GROWTH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibrillationRow {
    pub tau: f64,
    pub smp_length: usize,
    pub product: String,
    pub beta: f64,
    /// `√ρ(B₁B₂)` when the exponentials form a transpose pair.
    pub transpose_rho: Option<f64>,
    pub averaged_rho: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibrillationReport {
    /// Ordered by decreasing τ.
    pub rows: Vec<FibrillationRow>,
    pub bounded_length: bool,
    pub beta_increasing: bool,
    pub flagged: bool,
}

fn is_transpose_pair(exps: &[Matrix]) -> bool {
    exps.len() == 2 && {
        let t = exps[1].transpose();
        let scale = exps[0].max_abs().max(1e-300);
        exps[0].sub(&t).max_abs() <= TRANSPOSE_TOL * scale
    }
}

/// Records the s.m.p. length and `β(τ)` across dwell times. Fibrillation is
/// flagged when the length does not grow as τ shrinks while `β(τ)` keeps
/// increasing.
pub fn fibrillation_scan(family: &MatrixFamily, cfg: &AnalysisConfig) -> Result<FibrillationReport, BoundsError> {
    cfg.validate()?;
    let mut taus = cfg.taus.clone();
    taus.sort_by(|a, b| b.total_cmp(a));
    taus.dedup();
    let opts = SearchOptions {
        max_products: cfg.max_products,
        ..SearchOptions::new(cfg.max_word_len, SearchMode::Max, cfg.search)
    };
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in &taus {
        let exps = family.exponentials(tau)?;
        let c = search_candidate(&exps, &opts)?;
        let transpose_rho = if is_transpose_pair(&exps) {
            Some(spectral_radius(&exps[0].matmul(&exps[1]))?.sqrt())
        } else {
            None
        };
        rows.push(FibrillationRow {
            tau,
            smp_length: c.len(),
            product: render_word(&c.word, "B"),
            beta: c.beta(tau),
            transpose_rho,
            averaged_rho: c.averaged_rho,
        });
    }
    let bounded_length = rows.len() >= 2 && rows.last().unwrap().smp_length <= rows[0].smp_length;
    let beta_increasing = rows.len() >= 2 && rows.windows(2).all(|w| w[1].beta > w[0].beta + GROWTH_TOL);
    Ok(FibrillationReport {
        flagged: bounded_length && beta_increasing,
        rows,
        bounded_length,
        beta_increasing,
    })
}
