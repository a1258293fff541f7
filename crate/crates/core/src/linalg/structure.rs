//! Structural predicates: Metzler sign pattern, positive irreducibility of a
//! family, and dimension of orbit spans.

use super::matrix::Matrix;

/// Off-diagonal magnitude below which an entry does not create a digraph edge.
pub const TOL_ZERO: f64 = 1e-12;
/// Rank threshold for orbit spans.
pub const TOL_RANK: f64 = 1e-10;

/// True iff every off-diagonal entry is nonnegative.
pub fn is_metzler(a: &Matrix) -> bool {
    let n = a.dim();
    (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)] >= 0.0))
}

/// Positive irreducibility: the union digraph (edge `i → j` when some matrix
/// has a nonzero `(j, i)` entry) is strongly connected, i.e. no coordinate
/// subspace is invariant for every matrix.
pub fn positive_irreducible(family: &[Matrix]) -> bool {
    let Some(first) = family.first() else {
        return false;
    };
    let n = first.dim();
    let mut adj = vec![vec![false; n]; n];
    for a in family {
        for i in 0..n {
            for j in 0..n {
                if i != j && a[(j, i)].abs() > TOL_ZERO {
                    adj[i][j] = true;
                }
            }
        }
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let edge = if forward { adj[u][v] } else { adj[v][u] };
                if edge && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Dimension of `span{Π x}` over all products `Π` of length `< d`, computed by
/// Krylov-style expansion with Gram–Schmidt rank detection.
pub fn orbit_span_dimension(family: &[Matrix], x: &[f64]) -> usize {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || family.is_empty() {
        return 0;
    }
    let d = x.len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut frontier = Vec::new();
    if let Some(b) = orthogonalize(&basis, x.iter().map(|v| v / norm).collect()) {
        basis.push(b.clone());
        frontier.push(b);
    }
    for _ in 1..d {
        let mut next = Vec::new();
        for v in &frontier {
            for a in family {
                let w = a.mul_vec(v);
                let wn = w.iter().map(|t| t * t).sum::<f64>().sqrt();
                if wn == 0.0 {
                    continue;
                }
                let w: Vec<f64> = w.iter().map(|t| t / wn).collect();
                if let Some(b) = orthogonalize(&basis, w) {
                    basis.push(b.clone());
                    next.push(b);
                }
            }
        }
        if next.is_empty() || basis.len() == d {
            break;
        }
        frontier = next;
    }
    basis.len()
}

fn orthogonalize(basis: &[Vec<f64>], mut w: Vec<f64>) -> Option<Vec<f64>> {
    // Two passes of modified Gram–Schmidt.
    for _ in 0..2 {
        for b in basis {
            let c: f64 = b.iter().zip(&w).map(|(p, q)| p * q).sum();
            w.iter_mut().zip(b).for_each(|(q, p)| *q -= c * p);
        }
    }
    let n = w.iter().map(|t| t * t).sum::<f64>().sqrt();
    if n <= TOL_RANK {
        return None;
    }
    Some(w.into_iter().map(|t| t / n).collect())
}
