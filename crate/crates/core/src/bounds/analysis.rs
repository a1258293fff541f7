use serde::{Deserialize, Serialize};

use super::{admissible_tau, nearest_admissible_tau, BoundsError};
use crate::family::MatrixFamily;
use crate::linalg::positive_irreducible;
use crate::lp::{alpha_at, alpha_lower_infinite, alpha_upper, AlphaEstimate, DEFAULT_DELTA};
use crate::polytope::{build, verify_invariance, BuildCaps, BuildReport, HullKind, Polytope, TOL_ADD};
use crate::products::{
    initial_vertices, normalize_family, render_word, search_candidate, ProductCandidate, SearchMode,
    SearchOptions, SearchStrategy, DEFAULT_MAX_PRODUCTS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalysisMode {
    Stability,
    Stabilizability,
    Fibrillation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundsMode {
    Stability,
    /// Stability of a Metzler family, certified with a monotone polytope.
    PositiveStability,
    Stabilizability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Stable,
    Unstable,
    Stabilizable,
    NotStabilizable,
    Inconclusive,
}

impl Verdict {
    pub fn is_conclusive(self) -> bool {
        self != Verdict::Inconclusive
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Stabilizable => "stabilizable",
            Verdict::NotStabilizable => "not-stabilizable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub mode: AnalysisMode,
    pub taus: Vec<f64>,
    pub max_word_len: usize,
    pub nu: f64,
    /// Euler step of the `α` LPs.
    pub delta_lp: f64,
    /// Cross-check `α(δ)` against `α(δ/2)` and keep the finer value when they
    /// disagree. Without it `α` is evaluated at `delta_lp` alone.
    pub delta_check: bool,
    /// Exclusion half-width of the admissible-τ test.
    pub tau_delta: f64,
    pub search: SearchStrategy,
    pub max_products: usize,
    pub caps: BuildCaps,
    /// Use a symmetric polytope even for Metzler families.
    pub force_symmetric: bool,
    /// Drop redundant vertices before computing `α`.
    pub prune: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            mode: AnalysisMode::Stability,
            taus: vec![1.0],
            max_word_len: 8,
            nu: 0.0,
            delta_lp: DEFAULT_DELTA,
            delta_check: true,
            tau_delta: super::DEFAULT_TAU_DELTA,
            search: SearchStrategy::BranchBound,
            max_products: DEFAULT_MAX_PRODUCTS,
            caps: BuildCaps::default(),
            force_symmetric: false,
            prune: true,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), BoundsError> {
        if self.taus.is_empty() {
            return Err(BoundsError::Config("at least one dwell time is required".into()));
        }
        if let Some(t) = self.taus.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(BoundsError::Config(format!("dwell time must be positive, got {t}")));
        }
        if self.max_word_len == 0 {
            return Err(BoundsError::Config("maximal word length must be at least 1".into()));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(BoundsError::Config(format!("nu must be nonnegative, got {}", self.nu)));
        }
        if !(self.delta_lp > 0.0 && self.delta_lp.is_finite()) {
            return Err(BoundsError::Config(format!("delta must be positive, got {}", self.delta_lp)));
        }
        Ok(())
    }

    fn search_options(&self, mode: SearchMode) -> SearchOptions {
        SearchOptions {
            max_products: self.max_products,
            ..SearchOptions::new(self.max_word_len, mode, self.search)
        }
    }
}

/// Bounds for one dwell time.
///
/// `beta` is the product bound (`β_l`, or `β̌_l` for stabilizability) and
/// `alpha` the polytope bound; the latter is absent when the polytope did not
/// terminate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovBounds {
    pub mode: BoundsMode,
    pub tau: f64,
    pub beta: f64,
    pub alpha: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub gamma: Option<f64>,
    pub candidate: ProductCandidate,
    /// Run-length form of the candidate, e.g. `B1^8 B2^5`.
    pub product: String,
    pub nu: f64,
    pub eps_reported: f64,
    pub hull: HullKind,
    /// Extreme points of the polytope used for `α` (after pruning, if
    /// enabled). A symmetric hull has two per stored vertex.
    pub vertex_count: usize,
    /// Vertices actually stored, one per ± pair for symmetric hulls.
    pub stored_vertex_count: usize,
    /// Stored vertices produced by the builder, before pruning.
    pub raw_vertex_count: usize,
    pub terminated: bool,
    pub sweeps: usize,
    pub invariance_excess: Option<f64>,
    pub alpha_detail: Option<AlphaEstimate>,
    /// Only set for stabilizability: the family is positively irreducible.
    pub irreducible: Option<bool>,
    pub verdict: Verdict,
}

/// Full result of one analysis, including the certificate.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub bounds: LyapunovBounds,
    pub polytope: Polytope,
    pub build: BuildReport,
}

/// `ln(averaged ρ)/τ`.
pub fn beta_from_candidate(candidate: &ProductCandidate, tau: f64) -> f64 {
    candidate.beta(tau)
}

fn gate_tau(family: &MatrixFamily, tau: f64, cfg: &AnalysisConfig) -> Result<(), BoundsError> {
    if family.is_metzler() {
        return Ok(());
    }
    if tau > 2.0 {
        return Err(BoundsError::TauOutOfRange(tau));
    }
    if !admissible_tau(family.matrices(), tau, cfg.tau_delta)? {
        let nearest = nearest_admissible_tau(family.matrices(), tau, cfg.tau_delta)?;
        return Err(BoundsError::InadmissibleTau { tau, nearest });
    }
    Ok(())
}

fn point_count(p: &Polytope) -> usize {
    match p.hull {
        HullKind::Symmetric => 2 * p.len(),
        _ => p.len(),
    }
}

struct Certificate {
    polytope: Polytope,
    build: BuildReport,
    raw: usize,
    excess: Option<f64>,
    alpha: Option<AlphaEstimate>,
}

fn certify(
    family: &MatrixFamily,
    scaled: &[crate::linalg::Matrix],
    candidate: &ProductCandidate,
    hull: HullKind,
    cfg: &AnalysisConfig,
) -> Result<Certificate, BoundsError> {
    let v0 = initial_vertices(candidate, scaled, hull.requires_nonnegative(), hull == HullKind::Symmetric)?;
    let (mut polytope, build) = build(scaled, v0, hull, &cfg.caps)?;
    let raw = polytope.len();
    if !build.terminated {
        return Ok(Certificate {
            polytope,
            build,
            raw,
            excess: None,
            alpha: None,
        });
    }
    let excess = verify_invariance(&polytope, scaled)?;
    if cfg.prune {
        polytope.prune_redundant(TOL_ADD)?;
    }
    let alpha = if cfg.delta_check {
        match hull {
            HullKind::Infinite => alpha_lower_infinite(family.matrices(), &polytope, cfg.delta_lp)?,
            _ => alpha_upper(family.matrices(), &polytope, cfg.delta_lp)?,
        }
    } else {
        alpha_at(family.matrices(), &polytope, cfg.delta_lp)?
    };
    Ok(Certificate {
        polytope,
        build,
        raw,
        excess: Some(excess),
        alpha: Some(alpha),
    })
}

/// Bounds `β_l(τ) ≤ σ ≤ α(P)` on the Lyapunov exponent.
pub fn analyze_stability(family: &MatrixFamily, tau: f64, cfg: &AnalysisConfig) -> Result<Analysis, BoundsError> {
    cfg.validate()?;
    gate_tau(family, tau, cfg)?;
    let exps = family.exponentials(tau)?;
    let candidate = search_candidate(&exps, &cfg.search_options(SearchMode::Max))?;
    let beta = candidate.beta(tau);
    let scaled = normalize_family(&exps, tau, beta + cfg.nu);
    let positive = family.is_metzler() && !cfg.force_symmetric;
    let hull = if positive { HullKind::Monotone } else { HullKind::Symmetric };
    let cert = certify(family, &scaled, &candidate, hull, cfg)?;

    let alpha = cert.alpha.as_ref().map(|a| a.value);
    let verdict = match alpha {
        Some(a) if a < 0.0 => Verdict::Stable,
        _ if beta > 0.0 => Verdict::Unstable,
        _ => Verdict::Inconclusive,
    };
    let bounds = LyapunovBounds {
        mode: if positive { BoundsMode::PositiveStability } else { BoundsMode::Stability },
        tau,
        beta,
        alpha,
        lower: Some(beta),
        upper: alpha,
        gamma: alpha.map(|a| a - beta),
        product: render_word(&candidate.word, "B"),
        candidate,
        nu: cfg.nu,
        eps_reported: cfg.nu,
        hull,
        vertex_count: point_count(&cert.polytope),
        stored_vertex_count: cert.polytope.len(),
        raw_vertex_count: cert.raw,
        terminated: cert.build.terminated,
        sweeps: cert.build.sweeps,
        invariance_excess: cert.excess,
        alpha_detail: cert.alpha,
        irreducible: None,
        verdict,
    };
    Ok(Analysis {
        bounds,
        polytope: cert.polytope,
        build: cert.build,
    })
}

/// Bounds `α̌(Q) ≤ σ̌ ≤ β̌_l(τ)` on the lower Lyapunov exponent of a Metzler
/// family.
pub fn analyze_stabilizability(
    family: &MatrixFamily,
    tau: f64,
    cfg: &AnalysisConfig,
) -> Result<Analysis, BoundsError> {
    cfg.validate()?;
    if !family.is_metzler() {
        return Err(BoundsError::NotMetzler);
    }
    let irreducible = family.matrices().iter().all(|a| positive_irreducible(std::slice::from_ref(a)));
    let exps = family.exponentials(tau)?;
    let candidate = search_candidate(&exps, &cfg.search_options(SearchMode::Min))?;
    let beta = candidate.beta(tau);
    let scaled = normalize_family(&exps, tau, beta - cfg.nu);
    let cert = certify(family, &scaled, &candidate, HullKind::Infinite, cfg)?;

    let alpha = cert.alpha.as_ref().map(|a| a.value);
    let verdict = match alpha {
        _ if beta < 0.0 => Verdict::Stabilizable,
        Some(a) if a >= 0.0 => Verdict::NotStabilizable,
        _ => Verdict::Inconclusive,
    };
    let bounds = LyapunovBounds {
        mode: BoundsMode::Stabilizability,
        tau,
        beta,
        alpha,
        lower: alpha,
        upper: Some(beta),
        gamma: alpha.map(|a| (beta - a).abs()),
        product: render_word(&candidate.word, "B"),
        candidate,
        nu: cfg.nu,
        eps_reported: cfg.nu,
        hull: HullKind::Infinite,
        vertex_count: point_count(&cert.polytope),
        stored_vertex_count: cert.polytope.len(),
        raw_vertex_count: cert.raw,
        terminated: cert.build.terminated,
        sweeps: cert.build.sweeps,
        invariance_excess: cert.excess,
        alpha_detail: cert.alpha,
        irreducible: Some(irreducible),
        verdict,
    };
    Ok(Analysis {
        bounds,
        polytope: cert.polytope,
        build: cert.build,
    })
}
