//! Candidate spectrum-maximizing / minimizing products and the initial
//! vertex set derived from them.

mod search;
mod word;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{real_leading_vector, LinalgError, Matrix};

pub use search::{
    product_log_radius, search_candidate, SearchMode, SearchOptions, SearchStrategy,
    DEFAULT_MAX_PRODUCTS,
};
pub use word::{canonical_rotation, render_word};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProductError {
    #[error("empty family or zero word length")]
    EmptyInput,
    #[error(
        "enumeration exceeded {cap} evaluated words; use branch-bound or two-block-template search, or lower the maximal length"
    )]
    TooManyProducts { cap: usize },
    #[error("word letter {letter} out of range for a family of {len}")]
    BadLetter { letter: usize, len: usize },
    #[error("leading eigenvector of the product has a negative entry {value} at {index}")]
    NotNonnegative { index: usize, value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A word over matrix indices with its spectral data.
///
/// The word is stored in written order: it stands for the product
/// `B[w₀]·B[w₁]···B[wₙ₋₁]`, so the last letter acts first on a vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductCandidate {
    pub word: Vec<usize>,
    /// `ρ(Π)`; may overflow to `+∞` for very long words, see `log_rho`.
    pub rho: f64,
    pub log_rho: f64,
    /// `ρ(Π)^{1/n}`.
    pub averaged_rho: f64,
}

impl ProductCandidate {
    pub fn from_log_rho(word: Vec<usize>, log_rho: f64) -> Self {
        let n = word.len() as f64;
        Self {
            rho: log_rho.exp(),
            averaged_rho: (log_rho / n).exp(),
            log_rho,
            word,
        }
    }

    /// Evaluates `word` (rotated to canonical form) over `family`.
    pub fn evaluate(word: &[usize], family: &[Matrix]) -> Result<Self, ProductError> {
        if word.is_empty() || family.is_empty() {
            return Err(ProductError::EmptyInput);
        }
        if let Some(&letter) = word.iter().find(|&&w| w >= family.len()) {
            return Err(ProductError::BadLetter {
                letter,
                len: family.len(),
            });
        }
        let word = canonical_rotation(word);
        let log_rho = product_log_radius(&word, family)?;
        Ok(Self::from_log_rho(word, log_rho))
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `ln ρ(Π) / (nτ)`.
    pub fn beta(&self, tau: f64) -> f64 {
        self.log_rho / (self.word.len() as f64 * tau)
    }

    /// The product matrix itself, renormalized so its largest entry is 1.
    pub fn product(&self, family: &[Matrix]) -> Matrix {
        let d = family[0].dim();
        let mut p = Matrix::identity(d);
        for &w in &self.word {
            p = p.matmul(&family[w]);
            let m = p.max_abs();
            if m > 0.0 {
                p = p.scale(1.0 / m);
            }
        }
        p
    }
}

/// `{e^{−τs}·B}`: the exponentials of the shifted family `A − sI`.
pub fn normalize_family(exps: &[Matrix], tau: f64, shift: f64) -> Vec<Matrix> {
    let f = (-tau * shift).exp();
    exps.iter().map(|b| b.scale(f)).collect()
}

const DEDUP_TOL: f64 = 1e-10;
/// Entries this small relative to the largest are rounding noise.
const CLAMP_TOL: f64 = 1e-12;

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub(crate) fn near(a: &[f64], b: &[f64], tol: f64, symmetric: bool) -> bool {
    let scale = norm2(a).max(norm2(b));
    let diff = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    if diff <= tol * scale {
        return true;
    }
    symmetric && {
        let sum = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt();
        sum <= tol * scale
    }
}

/// Leading eigenvector of the product and its images along the cycle:
/// `v₁`, `B[wₙ₋₁]v₁`, `B[wₙ₋₂]B[wₙ₋₁]v₁`, ….
///
/// With `nonnegative` set, rounding-level negative entries are clamped to
/// zero and genuinely negative ones are an error. `symmetric` makes `v` and
/// `−v` count as duplicates.
pub fn initial_vertices(
    candidate: &ProductCandidate,
    family: &[Matrix],
    nonnegative: bool,
    symmetric: bool,
) -> Result<Vec<Vec<f64>>, ProductError> {
    let pi = candidate.product(family);
    let mut v = real_leading_vector(&pi)?;
    if nonnegative {
        clamp_nonnegative(&mut v)?;
    }
    let mut out: Vec<Vec<f64>> = vec![v.clone()];
    for &w in candidate.word.iter().skip(1).rev() {
        v = family[w].mul_vec(&v);
        if nonnegative {
            clamp_nonnegative(&mut v)?;
        }
        if !out.iter().any(|u| near(u, &v, DEDUP_TOL, symmetric)) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

fn clamp_nonnegative(v: &mut [f64]) -> Result<(), ProductError> {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (index, x) in v.iter_mut().enumerate() {
        if *x < 0.0 {
            if *x >= -CLAMP_TOL * max {
                *x = 0.0;
            } else {
                return Err(ProductError::NotNonnegative { index, value: *x });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_radius;

    fn m(rows: &[[f64; 2]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn evaluate_matches_direct_product() {
        let a = m(&[[1.0, 1.0], [-1.0, 1.0]]);
        let b = m(&[[1.0, 1.0], [-1.0, 0.0]]);
        let fam = [a.clone(), b.clone()];
        let c = ProductCandidate::evaluate(&[0, 0, 1, 0, 0, 0, 1], &fam).unwrap();
        // ρ(B̃₁²B̃₂B̃₁³B̃₂) = 8 + 4√2
        assert!((c.rho - (8.0 + 4.0 * 2f64.sqrt())).abs() < 1e-10);
        assert!((c.averaged_rho - c.rho.powf(1.0 / 7.0)).abs() < 1e-14);
        // rotation does not change the canonical form
        let d = ProductCandidate::evaluate(&[1, 0, 0, 0, 1, 0, 0], &fam).unwrap();
        assert_eq!(d.word, c.word);
        let direct = a.matmul(&a).matmul(&b).matmul(&a).matmul(&a).matmul(&a).matmul(&b);
        assert!((spectral_radius(&direct).unwrap() - c.rho).abs() < 1e-10);
    }

    #[test]
    fn single_letter_gives_one_vertex() {
        let a = m(&[[2.0, 1.0], [0.0, 1.0]]);
        let c = ProductCandidate::evaluate(&[0], std::slice::from_ref(&a)).unwrap();
        let v = initial_vertices(&c, &[a], false, true).unwrap();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn identity_prefixes_collapse() {
        let i = Matrix::identity(2);
        let c = ProductCandidate::evaluate(&[0, 1], &[i.clone(), i.clone()]).unwrap();
        assert_eq!(initial_vertices(&c, &[i.clone(), i], false, true).unwrap().len(), 1);
    }

    #[test]
    fn vertices_follow_the_cycle() {
        let b1 = m(&[[7.0, 0.0], [2.0, 3.0]]);
        let b2 = m(&[[2.0, 4.0], [0.0, 8.0]]);
        let fam = [b1, b2];
        let c = ProductCandidate::evaluate(&[0, 1, 0, 0, 1, 0, 0, 1], &fam).unwrap();
        let v = initial_vertices(&c, &fam, true, false).unwrap();
        assert_eq!(v.len(), 8);
        let pi = c.product(&fam);
        let pv = pi.mul_vec(&v[0]);
        let lam = pv[0] / v[0][0];
        assert!(pv.iter().zip(&v[0]).all(|(a, b)| (a - lam * b).abs() < 1e-8 * lam.abs()));
        // the last image returns to a multiple of v₁ after one more step
        let back = fam[c.word[0]].mul_vec(&v[7]);
        let r = back[0] / v[0][0];
        assert!((back[1] - r * v[0][1]).abs() < 1e-8 * r);
        assert!(v.iter().flatten().all(|&x| x >= 0.0));
    }

    #[test]
    fn normalization_makes_radius_one() {
        let a = m(&[[-1.0, 3.0], [0.5, -2.0]]);
        let tau = 0.7;
        let exps = [crate::linalg::mat_exp(&a, tau).unwrap()];
        let s = crate::linalg::spectral_abscissa(&a).unwrap();
        let n = normalize_family(&exps, tau, s);
        assert!((spectral_radius(&n[0]).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(normalize_family(&exps, tau, 0.0), exps.to_vec());
    }
}
