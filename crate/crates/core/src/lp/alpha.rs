//! Upper bound `α(P)` and lower bound `α̌(Q)` from a polytope.
//!
//! For every generator `A` and vertex `w` one LP finds the extreme shift `α`
//! for which the Euler step `w + δ(A − αI)w` stays in the hull. Each pair gets
//! its own hull coefficients. The upper bound is the maximum over pairs, the
//! lower bound the minimum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::simplex::{solve_lp, LpProblem, LpStatus};
use super::LpError;
use crate::linalg::Matrix;
use crate::polytope::{HullKind, Polytope};

pub const DEFAULT_DELTA: f64 = 1e-3;
/// Disagreement between `α(δ)` and `α(δ/2)` that triggers the refinement.
pub const DELTA_AGREEMENT: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaEstimate {
    pub value: f64,
    /// Step size the reported value was computed with.
    pub delta: f64,
    /// Generator and vertex attaining the extreme value.
    pub matrix_index: usize,
    pub vertex_index: usize,
    /// True when `α(δ)` and `α(δ/2)` differed by more than [`DELTA_AGREEMENT`].
    pub delta_warning: bool,
}

fn pair_lp(
    hull: HullKind,
    a: &Matrix,
    w: &[f64],
    vertices: &[Vec<f64>],
    delta: f64,
) -> Result<Option<f64>, LpError> {
    let d = w.len();
    let n = vertices.len();
    let aw = a.mul_vec(w);
    let target: Vec<f64> = (0..d).map(|r| w[r] + delta * aw[r]).collect();
    match hull {
        HullKind::Symmetric => {
            // vars: α, λ₁..λₙ, μ₁..μₙ
            let mut c = vec![0.0; 1 + 2 * n];
            c[0] = 1.0;
            let mut p = LpProblem::minimize(c);
            p.set_free(0);
            for r in 0..d {
                let mut row = Vec::with_capacity(1 + 2 * n);
                row.push(delta * w[r]);
                row.extend(vertices.iter().map(|v| v[r]));
                row.extend(vertices.iter().map(|v| -v[r]));
                p.eq(row, target[r]);
            }
            let mut mass = vec![1.0; 1 + 2 * n];
            mass[0] = 0.0;
            p.le(mass, 1.0);
            finish(solve_lp(&p)?, 1.0)
        }
        HullKind::Monotone => {
            // w + δ(A − αI)w ≤ Σ t v, Σ t ≤ 1
            let mut c = vec![0.0; 1 + n];
            c[0] = 1.0;
            let mut p = LpProblem::minimize(c);
            p.set_free(0);
            for r in 0..d {
                let mut row = Vec::with_capacity(1 + n);
                row.push(-delta * w[r]);
                row.extend(vertices.iter().map(|v| -v[r]));
                p.le(row, -target[r]);
            }
            let mut mass = vec![1.0; 1 + n];
            mass[0] = 0.0;
            p.le(mass, 1.0);
            finish(solve_lp(&p)?, 1.0)
        }
        HullKind::Infinite => {
            // max α: Σ t v ≤ w + δ(A − αI)w, Σ t ≥ 1
            let mut c = vec![0.0; 1 + n];
            c[0] = -1.0;
            let mut p = LpProblem::minimize(c);
            p.set_free(0);
            for r in 0..d {
                let mut row = Vec::with_capacity(1 + n);
                row.push(delta * w[r]);
                row.extend(vertices.iter().map(|v| v[r]));
                p.le(row, target[r]);
            }
            let mut mass = vec![1.0; 1 + n];
            mass[0] = 0.0;
            p.ge(mass, 1.0);
            finish(solve_lp(&p)?, -1.0)
        }
    }
}

fn finish(s: super::LpSolution, sign: f64) -> Result<Option<f64>, LpError> {
    match s.status {
        LpStatus::Optimal => Ok(Some(sign * s.objective_value)),
        LpStatus::Infeasible => Ok(None),
        LpStatus::Unbounded => Err(LpError::Unbounded),
    }
}

/// `α` at a fixed step `δ`.
pub fn alpha_at(
    generators: &[Matrix],
    polytope: &Polytope,
    delta: f64,
) -> Result<AlphaEstimate, LpError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(LpError::InvalidDelta(delta));
    }
    if polytope.is_empty() {
        return Err(LpError::DimensionMismatch("empty polytope".into()));
    }
    let hull = polytope.hull;
    let pairs: Vec<(usize, usize)> = (0..generators.len())
        .flat_map(|i| (0..polytope.len()).map(move |k| (i, k)))
        .collect();
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, k)| {
            pair_lp(
                hull,
                &generators[i],
                &polytope.vertices[k],
                &polytope.vertices,
                delta,
            )?
            .ok_or(LpError::AlphaInfeasible {
                matrix: i,
                vertex: k,
            })
        })
        .collect::<Result<_, _>>()?;

    let lower = hull == HullKind::Infinite;
    let mut best = 0;
    for (j, &v) in values.iter().enumerate() {
        let better = if lower { v < values[best] } else { v > values[best] };
        if better {
            best = j;
        }
    }
    Ok(AlphaEstimate {
        value: values[best],
        delta,
        matrix_index: pairs[best].0,
        vertex_index: pairs[best].1,
        delta_warning: false,
    })
}

fn with_refinement(
    generators: &[Matrix],
    polytope: &Polytope,
    delta: f64,
) -> Result<AlphaEstimate, LpError> {
    let coarse = alpha_at(generators, polytope, delta)?;
    let fine = alpha_at(generators, polytope, 0.5 * delta)?;
    if (coarse.value - fine.value).abs() > DELTA_AGREEMENT {
        Ok(AlphaEstimate {
            delta_warning: true,
            ..fine
        })
    } else {
        Ok(coarse)
    }
}

/// Upper bound `α(P)` for a symmetric or monotone polytope.
pub fn alpha_upper(
    generators: &[Matrix],
    polytope: &Polytope,
    delta: f64,
) -> Result<AlphaEstimate, LpError> {
    if polytope.hull == HullKind::Infinite {
        return Err(LpError::WrongHull(polytope.hull));
    }
    with_refinement(generators, polytope, delta)
}

/// Lower bound `α̌(Q)` for an infinite polytope.
pub fn alpha_lower_infinite(
    generators: &[Matrix],
    polytope: &Polytope,
    delta: f64,
) -> Result<AlphaEstimate, LpError> {
    if polytope.hull != HullKind::Infinite {
        return Err(LpError::WrongHull(polytope.hull));
    }
    with_refinement(generators, polytope, delta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polytope {
        Polytope::new(HullKind::Symmetric, vec![vec![1.0, 1.0], vec![1.0, -1.0]])
    }

    #[test]
    fn scalar_family_gives_its_shift() {
        for &s in &[-0.7, 0.0, 1.3] {
            let a = Matrix::identity(2).scale(s);
            let est = alpha_upper(std::slice::from_ref(&a), &square(), DEFAULT_DELTA).unwrap();
            assert!((est.value - s).abs() < 1e-9, "s = {s}: {}", est.value);
            let mono = Polytope::new(HullKind::Monotone, vec![vec![1.0, 0.5], vec![0.2, 1.0]]);
            let est = alpha_upper(std::slice::from_ref(&a), &mono, DEFAULT_DELTA).unwrap();
            assert!((est.value - s).abs() < 1e-9);
            let inf = Polytope::new(HullKind::Infinite, vec![vec![1.0, 0.5], vec![0.2, 1.0]]);
            let est = alpha_lower_infinite(&[a], &inf, DEFAULT_DELTA).unwrap();
            assert!((est.value - s).abs() < 1e-9);
        }
    }

    #[test]
    fn rotation_on_square() {
        // A = J (rotation generator) on the square |x|+|y| ≤ 1 with vertices
        // (±1,0),(0,±1): at w = (1,0), Aw = (0,-1) is tangent to no edge
        // and the tightest α makes (1-δα, -δ) land on the edge x+|y| = 1,
        // i.e. 1 - δα + δ = 1 → α = 1.
        let p = Polytope::new(HullKind::Symmetric, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let j = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let est = alpha_at(&[j], &p, 1e-3).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_hull_is_rejected() {
        let a = Matrix::identity(2);
        assert!(matches!(
            alpha_lower_infinite(std::slice::from_ref(&a), &square(), 1e-3),
            Err(LpError::WrongHull(HullKind::Symmetric))
        ));
        assert!(matches!(
            alpha_at(&[a], &square(), 0.0),
            Err(LpError::InvalidDelta(_))
        ));
    }

    #[test]
    fn image_outside_span_names_pair() {
        // Segment polytope in ℝ² cannot absorb a rotated step.
        let p = Polytope::new(HullKind::Symmetric, vec![vec![1.0, 0.0]]);
        let j = Matrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert!(matches!(
            alpha_at(&[Matrix::identity(2), j], &p, 1e-3),
            Err(LpError::AlphaInfeasible { matrix: 1, vertex: 0 })
        ));
    }
}
