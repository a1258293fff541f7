//! Gauge-type membership functionals for the three hull kinds.
//!
//! Each function returns the smallest (largest, for the infinite hull)
//! scaling `f` such that `z` lies in `f·hull(V)`:
//!
//! * symmetric `co(V ∪ −V)`: `min Σ(λ+μ)` with `Σ(λ−μ)v = z`;
//! * monotone `(co(V) − ℝ₊ᵈ) ∩ ℝ₊ᵈ`: `min Σλ` with `Σλv ≥ z`;
//! * infinite `co(V) + ℝ₊ᵈ`: `max Σλ` with `Σλv ≤ z`.
//!
//! `z` is inside the symmetric or monotone hull iff `f ≤ 1`, and inside the
//! infinite hull iff `f ≥ 1`.

use super::simplex::{solve_lp, LpProblem, LpStatus};
use super::LpError;

fn check_dims(z: &[f64], vertices: &[Vec<f64>]) -> Result<(), LpError> {
    if let Some(v) = vertices.iter().find(|v| v.len() != z.len()) {
        return Err(LpError::DimensionMismatch(format!(
            "vertex of length {} against point of length {}",
            v.len(),
            z.len()
        )));
    }
    Ok(())
}

/// Returns `+∞` when `z` is outside the span of `vertices`.
pub fn membership_sym(z: &[f64], vertices: &[Vec<f64>]) -> Result<f64, LpError> {
    check_dims(z, vertices)?;
    if z.iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    if vertices.is_empty() {
        return Ok(f64::INFINITY);
    }
    let n = vertices.len();
    let mut p = LpProblem::minimize(vec![1.0; 2 * n]);
    for r in 0..z.len() {
        let mut row = Vec::with_capacity(2 * n);
        row.extend(vertices.iter().map(|v| v[r]));
        row.extend(vertices.iter().map(|v| -v[r]));
        p.eq(row, z[r]);
    }
    let s = solve_lp(&p)?;
    Ok(match s.status {
        LpStatus::Optimal => s.objective_value,
        _ => f64::INFINITY,
    })
}

/// Returns `+∞` when some coordinate of `z` is positive while every vertex
/// vanishes there.
pub fn membership_monotone(z: &[f64], vertices: &[Vec<f64>]) -> Result<f64, LpError> {
    check_dims(z, vertices)?;
    if z.iter().all(|&x| x <= 0.0) {
        return Ok(0.0);
    }
    if vertices.is_empty() {
        return Ok(f64::INFINITY);
    }
    let n = vertices.len();
    let mut p = LpProblem::minimize(vec![1.0; n]);
    for r in 0..z.len() {
        if z[r] <= 0.0 {
            continue;
        }
        p.ge(vertices.iter().map(|v| v[r]).collect(), z[r]);
    }
    let s = solve_lp(&p)?;
    Ok(match s.status {
        LpStatus::Optimal => s.objective_value,
        _ => f64::INFINITY,
    })
}

/// Returns `0` for points with a negative coordinate (outside the cone) and
/// for `z = 0`.
pub fn membership_infinite(z: &[f64], vertices: &[Vec<f64>]) -> Result<f64, LpError> {
    check_dims(z, vertices)?;
    let max = z.iter().fold(0.0, |m: f64, x| m.max(x.abs()));
    // Coordinates within rounding of zero are treated as zero.
    let floor = -1e-13 * max.max(1e-300);
    if z.iter().any(|&x| x < floor) || vertices.is_empty() {
        return Ok(0.0);
    }
    let n = vertices.len();
    let mut p = LpProblem::minimize(vec![-1.0; n]);
    for r in 0..z.len() {
        p.le(vertices.iter().map(|v| v[r]).collect(), z[r].max(0.0));
    }
    let s = solve_lp(&p)?;
    Ok(match s.status {
        LpStatus::Optimal => -s.objective_value,
        LpStatus::Unbounded => f64::INFINITY,
        LpStatus::Infeasible => 0.0,
    })
}
