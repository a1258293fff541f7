//! Admissible dwell times: τ must avoid the resonance points at which
//! `e^{τA}` can acquire invariant subspaces that `A` does not have.

use crate::linalg::{eig_full, LinalgError, Matrix};

pub const DEFAULT_TAU_DELTA: f64 = 1e-6;
const TOL_IMAG: f64 = 1e-12;
/// Gives up looking for a nearby admissible value after this many steps.
const MAX_PROBES: usize = 1_000_000;

/// Base periods `p`: the forbidden points are `n·p` for `n ≥ 1`.
fn periods(family: &[Matrix]) -> Result<Vec<f64>, LinalgError> {
    let mut out = Vec::new();
    for a in family {
        let ev = eig_full(a)?.eigenvalues;
        let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for (i, li) in ev.iter().enumerate() {
            if li.im.abs() > TOL_IMAG * scale {
                out.push(std::f64::consts::PI / li.im.abs());
            }
            for lj in &ev[i + 1..] {
                let d = (li.im - lj.im).abs();
                if d > TOL_IMAG * scale {
                    out.push(2.0 * std::f64::consts::PI / d);
                }
            }
        }
    }
    Ok(out)
}

fn admissible_with(periods: &[f64], tau: f64, delta: f64) -> bool {
    if !(tau > 0.0 && tau <= 2.0) {
        return false;
    }
    let mut t = tau;
    while t <= 2.0 {
        for &p in periods {
            if p > 2.0 + delta {
                continue;
            }
            let n = (t / p).round().max(1.0);
            if n * p <= 2.0 + delta && (t - n * p).abs() < delta {
                return false;
            }
        }
        t *= 2.0;
    }
    true
}

/// Whether `tau ∈ (0, 2]` avoids every forbidden point (within `delta`) of
/// every matrix, at every dyadic multiple `2ᵏτ ≤ 2`.
pub fn admissible_tau(family: &[Matrix], tau: f64, delta: f64) -> Result<bool, LinalgError> {
    Ok(admissible_with(&periods(family)?, tau, delta))
}

/// The admissible value closest to `tau`, probing outward in steps of
/// `delta`.
pub fn nearest_admissible_tau(family: &[Matrix], tau: f64, delta: f64) -> Result<Option<f64>, LinalgError> {
    let p = periods(family)?;
    let tau = tau.clamp(delta, 2.0);
    for k in 0..MAX_PROBES {
        for cand in [tau - k as f64 * delta, tau + k as f64 * delta] {
            if admissible_with(&p, cand, delta) {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn m(rows: &[[f64; 2]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn real_spectrum_is_always_admissible() {
        let a = m(&[[-2.0, 0.0], [10.0, -3.0]]);
        for &t in &[2.0, 1.0, PI / 2.0, 0.001] {
            assert!(admissible_tau(std::slice::from_ref(&a), t, DEFAULT_TAU_DELTA).unwrap());
        }
    }

    #[test]
    fn unit_rotation_has_no_forbidden_points_below_two() {
        // eigenvalues ±i: forbidden points are multiples of π, all beyond 2
        let a = m(&[[0.0, 1.0], [-1.0, 0.0]]);
        assert!(admissible_tau(std::slice::from_ref(&a), 1.0, DEFAULT_TAU_DELTA).unwrap());
        assert!(admissible_tau(&[a], PI / 2.0, DEFAULT_TAU_DELTA).unwrap());
    }

    #[test]
    fn faster_rotation_forbids_dyadic_multiples() {
        // eigenvalues ±2i: forbidden point π/2, reached by τ = π/2 and by 2·(π/4)
        let a = m(&[[0.0, 2.0], [-2.0, 0.0]]);
        assert!(!admissible_tau(std::slice::from_ref(&a), PI / 2.0, DEFAULT_TAU_DELTA).unwrap());
        assert!(!admissible_tau(std::slice::from_ref(&a), PI / 4.0, DEFAULT_TAU_DELTA).unwrap());
        assert!(admissible_tau(std::slice::from_ref(&a), 1.0, DEFAULT_TAU_DELTA).unwrap());
        assert!(!admissible_tau(std::slice::from_ref(&a), 0.0, DEFAULT_TAU_DELTA).unwrap());
        let near = nearest_admissible_tau(std::slice::from_ref(&a), PI / 4.0, DEFAULT_TAU_DELTA).unwrap().unwrap();
        assert!((near - PI / 4.0).abs() < 1e-5);
        assert!(admissible_tau(&[a], near, DEFAULT_TAU_DELTA).unwrap());
    }
}
