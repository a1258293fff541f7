//! Sweep-based vertex generation: images of the newest vertices under every
//! matrix are tested against the current hull, and those found outside are
//! added, until a sweep adds nothing.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{HullKind, Polytope};
use crate::linalg::Matrix;
use crate::lp::LpError;
use crate::products::near;

/// An image with gauge value in `(1, 1 + TOL_ADD]` counts as inside.
pub const TOL_ADD: f64 = 1e-8;
/// New vertices closer than this (relative) to an existing one are dropped.
pub const TOL_DUPLICATE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildCaps {
    pub max_sweeps: usize,
    pub max_vertices: usize,
    pub tol_add: f64,
}

impl Default for BuildCaps {
    fn default() -> Self {
        Self {
            max_sweeps: 200,
            max_vertices: 50_000,
            tol_add: TOL_ADD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub terminated: bool,
    pub sweeps: usize,
    pub initial_vertices: usize,
    pub vertices_added_per_sweep: Vec<usize>,
    pub membership_lp_count: usize,
    /// For each vertex, the vertex and matrix whose image it is (`None` for
    /// initial vertices).
    pub parents: Vec<Option<(usize, usize)>>,
}

impl BuildReport {
    /// Recomputes vertex `i` from its initial ancestor by replaying the
    /// recorded chain of matrices.
    pub fn replay(&self, i: usize, family: &[Matrix], initial: &[Vec<f64>]) -> Vec<f64> {
        let mut chain = Vec::new();
        let mut k = i;
        while let Some((parent, m)) = self.parents[k] {
            chain.push(m);
            k = parent;
        }
        let mut v = initial[k].clone();
        for &m in chain.iter().rev() {
            v = family[m].mul_vec(&v);
        }
        v
    }
}

fn outside(hull: HullKind, f: f64, tol: f64) -> bool {
    match hull {
        HullKind::Infinite => f < 1.0 - tol,
        _ => f > 1.0 + tol,
    }
}

/// Builds a polytope invariant under `family` (already shift-normalized)
/// starting from `v0`.
///
/// Within a sweep all images are screened in parallel against the hull as
/// it stood at the start of the sweep; the flagged ones are then rechecked
/// in order against the growing vertex set, so the result is the same as a
/// sequential pass.
pub fn build(
    family: &[Matrix],
    v0: Vec<Vec<f64>>,
    hull: HullKind,
    caps: &BuildCaps,
) -> Result<(Polytope, BuildReport), LpError> {
    let symmetric = hull == HullKind::Symmetric;
    let mut poly = Polytope::new(hull, Vec::new());
    let mut parents = Vec::new();
    for v in v0 {
        if !poly.vertices.iter().any(|u| near(u, &v, TOL_DUPLICATE, symmetric)) {
            poly.vertices.push(v);
            poly.generation.push(0);
            parents.push(None);
        }
    }
    let mut report = BuildReport {
        terminated: false,
        sweeps: 0,
        initial_vertices: poly.len(),
        vertices_added_per_sweep: Vec::new(),
        membership_lp_count: 0,
        parents: Vec::new(),
    };
    let mut frontier: Vec<usize> = (0..poly.len()).collect();

    while report.sweeps < caps.max_sweeps {
        report.sweeps += 1;
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&k| (0..family.len()).map(move |m| (k, m)))
            .collect();
        let snapshot = &poly.vertices;
        let screened: Vec<Option<Vec<f64>>> = jobs
            .par_iter()
            .map(|&(k, m)| {
                let z = family[m].mul_vec(&snapshot[k]);
                let f = hull.membership(&z, snapshot)?;
                Ok(outside(hull, f, caps.tol_add).then_some(z))
            })
            .collect::<Result<_, LpError>>()?;
        report.membership_lp_count += jobs.len();

        let start = poly.len();
        let mut added = 0;
        for (&(k, m), z) in jobs.iter().zip(screened) {
            let Some(z) = z else { continue };
            if poly.len() > start {
                report.membership_lp_count += 1;
                let f = poly.membership(&z)?;
                if !outside(hull, f, caps.tol_add) {
                    continue;
                }
            }
            if poly.vertices.iter().any(|u| near(u, &z, TOL_DUPLICATE, symmetric)) {
                continue;
            }
            poly.vertices.push(z);
            poly.generation.push(report.sweeps);
            parents.push(Some((k, m)));
            added += 1;
            if poly.len() >= caps.max_vertices {
                report.vertices_added_per_sweep.push(added);
                report.parents = parents;
                return Ok((poly, report));
            }
        }
        report.vertices_added_per_sweep.push(added);
        if added == 0 {
            report.terminated = true;
            break;
        }
        frontier = (start..poly.len()).collect();
    }
    report.parents = parents;
    Ok((poly, report))
}

/// Largest excess of any image `B·v` over the hull (`f − 1`, or `1 − f` for
/// the infinite hull). A value `≤ TOL_ADD` certifies invariance.
pub fn verify_invariance(poly: &Polytope, family: &[Matrix]) -> Result<f64, LpError> {
    let jobs: Vec<(usize, usize)> = (0..poly.len())
        .flat_map(|k| (0..family.len()).map(move |m| (k, m)))
        .collect();
    let excess: Vec<f64> = jobs
        .par_iter()
        .map(|&(k, m)| {
            let z = family[m].mul_vec(&poly.vertices[k]);
            Ok(poly.hull.excess(poly.membership(&z)?))
        })
        .collect::<Result<_, LpError>>()?;
    Ok(excess.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_terminates_immediately() {
        let (p, r) = build(
            &[Matrix::identity(2)],
            vec![vec![1.0, 0.0]],
            HullKind::Symmetric,
            &BuildCaps::default(),
        )
        .unwrap();
        assert!(r.terminated);
        assert_eq!(r.sweeps, 1);
        assert_eq!(p.len(), 1);
        assert!(verify_invariance(&p, &[Matrix::identity(2)]).unwrap() <= 0.0);
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let j = m(&[[0.0, -1.0], [1.0, 0.0]]);
        let (p, r) = build(std::slice::from_ref(&j), vec![vec![1.0, 0.0]], HullKind::Symmetric, &BuildCaps::default()).unwrap();
        assert!(r.terminated);
        assert_eq!(p.len(), 2);
        assert_eq!(r.initial_vertices + r.vertices_added_per_sweep.iter().sum::<usize>(), p.len());
        assert!(verify_invariance(&p, &[j]).unwrap() <= TOL_ADD);
    }

    #[test]
    fn expanding_map_hits_the_cap() {
        let caps = BuildCaps {
            max_sweeps: 5,
            ..Default::default()
        };
        let (_, r) = build(&[Matrix::identity(2).scale(2.0)], vec![vec![1.0, 1.0]], HullKind::Symmetric, &caps)
            .unwrap();
        assert!(!r.terminated);
        assert_eq!(r.sweeps, 5);
    }

    #[test]
    fn provenance_replays() {
        let fam = [m(&[[0.5, 0.4], [-0.3, 0.6]]), m(&[[0.7, -0.2], [0.5, 0.3]])];
        let rho = crate::linalg::spectral_radius(&fam[0]).unwrap();
        let fam: Vec<Matrix> = fam.iter().map(|b| b.scale(1.0 / rho)).collect();
        let v0 = vec![vec![1.0, 0.0]];
        let (p, r) = build(&fam, v0.clone(), HullKind::Symmetric, &BuildCaps { max_sweeps: 30, ..Default::default() }).unwrap();
        for i in 0..p.len() {
            let v = r.replay(i, &fam, &v0);
            assert!(v.iter().zip(&p.vertices[i]).all(|(a, b)| (a - b).abs() < 1e-10));
        }
    }

    #[test]
    fn deleting_a_vertex_breaks_invariance() {
        let j = m(&[[0.0, -1.0], [1.0, 0.0]]);
        let mut p = Polytope::new(HullKind::Symmetric, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(verify_invariance(&p, std::slice::from_ref(&j)).unwrap() <= 0.0 + 1e-12);
        p.vertices.pop();
        p.generation.pop();
        assert!(verify_invariance(&p, &[j]).unwrap() > 0.0);
    }
}
