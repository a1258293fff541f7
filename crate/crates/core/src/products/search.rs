//! Necklace enumeration with incremental prefix products, optional
//! branch-and-bound pruning, and a restricted two-block search for very long
//! candidates.
//!
//! Values are compared in log space: `ln ρ(Π)/n`. Two values closer than
//! `TIE_TOL` are tied; ties go to the shorter word, then the
//! lexicographically smaller one.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ProductCandidate, ProductError};
use crate::linalg::{spectral_radius, Matrix};

pub const DEFAULT_MAX_PRODUCTS: usize = 5_000_000;
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Spectrum-maximizing product.
    Max,
    /// Spectrum-minimizing product.
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStrategy {
    Exhaustive,
    BranchBound,
    /// Only words `B_i^a B_j^b`; a restriction, not a certified search.
    TwoBlockTemplate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_len: usize,
    pub mode: SearchMode,
    pub strategy: SearchStrategy,
    pub max_products: usize,
}

impl SearchOptions {
    pub fn new(max_len: usize, mode: SearchMode, strategy: SearchStrategy) -> Self {
        Self {
            max_len,
            mode,
            strategy,
            max_products: DEFAULT_MAX_PRODUCTS,
        }
    }
}

/// A matrix kept as `e^{log_scale}·m` with `max|m| = 1`.
#[derive(Clone)]
struct Scaled {
    m: Matrix,
    log_scale: f64,
}

impl Scaled {
    fn new(m: Matrix) -> Self {
        let mut s = Self { m, log_scale: 0.0 };
        s.renormalize();
        s
    }

    fn renormalize(&mut self) {
        let a = self.m.max_abs();
        if a > 0.0 && a.is_finite() {
            self.m = self.m.scale(1.0 / a);
            self.log_scale += a.ln();
        }
    }

    fn times(&self, b: &Scaled) -> Scaled {
        let mut s = Scaled {
            m: self.m.matmul(&b.m),
            log_scale: self.log_scale + b.log_scale,
        };
        s.renormalize();
        s
    }

    fn log_radius(&self) -> Result<f64, ProductError> {
        Ok(self.log_scale + spectral_radius(&self.m)?.ln())
    }
}

/// `ln ρ(B[w₀]···B[wₙ₋₁])` computed with renormalized partial products.
pub fn product_log_radius(word: &[usize], family: &[Matrix]) -> Result<f64, ProductError> {
    let mut p = Scaled::new(Matrix::identity(family[0].dim()));
    for &w in word {
        p = p.times(&Scaled::new(family[w].clone()));
    }
    p.log_radius()
}

/// Running best under the value / length / lexicographic order.
struct Incumbent {
    mode: SearchMode,
    best: Option<(f64, Vec<usize>)>,
}

impl Incumbent {
    fn value(&self) -> Option<f64> {
        self.best.as_ref().map(|b| b.0)
    }

    fn offer(&mut self, value: f64, word: &[usize]) {
        let better = match &self.best {
            None => true,
            Some((bv, bw)) => {
                let diff = match self.mode {
                    SearchMode::Max => value - bv,
                    SearchMode::Min => bv - value,
                };
                // −∞ against −∞ compares as a tie
                if diff > TIE_TOL {
                    true
                } else if diff < -TIE_TOL || (diff.is_nan() && value != *bv) {
                    false
                } else {
                    match word.len().cmp(&bw.len()) {
                        Ordering::Less => true,
                        Ordering::Greater => false,
                        Ordering::Equal => word < bw.as_slice(),
                    }
                }
            }
        };
        if better {
            self.best = Some((value, word.to_vec()));
        }
    }

    fn finish(self) -> Result<ProductCandidate, ProductError> {
        let (value, word) = self.best.ok_or(ProductError::EmptyInput)?;
        Ok(ProductCandidate::from_log_rho(word.clone(), value * word.len() as f64))
    }
}

/// Per-letter data for the pruning bounds.
struct Bounds {
    /// max mode: `ln max‖B‖∞`, `ln max‖B‖₁`
    log_norms: [f64; 2],
    /// min mode on nonnegative families: `ln min` row / column sums
    log_min_sums: Option<[f64; 2]>,
}

fn min_row_sum(m: &Matrix) -> f64 {
    (0..m.dim()).map(|i| m.row(i).iter().sum::<f64>()).fold(f64::INFINITY, f64::min)
}

fn min_col_sum(m: &Matrix) -> f64 {
    min_row_sum(&m.transpose())
}

impl Bounds {
    fn new(family: &[Matrix]) -> Self {
        let max_inf = family.iter().map(Matrix::norm_inf).fold(0.0, f64::max);
        let max_one = family.iter().map(Matrix::norm_one).fold(0.0, f64::max);
        let nonneg = family.iter().all(|b| b.as_slice().iter().all(|&x| x >= 0.0));
        let log_min_sums = nonneg.then(|| {
            [
                family.iter().map(min_row_sum).fold(f64::INFINITY, f64::min).ln(),
                family.iter().map(min_col_sum).fold(f64::INFINITY, f64::min).ln(),
            ]
        });
        Self {
            log_norms: [max_inf.ln(), max_one.ln()],
            log_min_sums,
        }
    }

    /// Extreme of `(a + (n−k)·m)/n` over `n ∈ [k+1, l]`; the expression is
    /// monotone in `n`, so only the endpoints matter.
    fn endpoint(a: f64, m: f64, k: usize, l: usize, upper: bool) -> f64 {
        let f = |n: usize| (a + (n - k) as f64 * m) / n as f64;
        let (x, y) = (f(k + 1), f(l));
        if upper {
            x.max(y)
        } else {
            x.min(y)
        }
    }

    /// Whether no extension of `p` (length `k`) up to length `l` can beat
    /// `best`.
    fn prune(&self, mode: SearchMode, p: &Scaled, k: usize, l: usize, best: f64) -> bool {
        if k >= l {
            return true;
        }
        match mode {
            SearchMode::Max => {
                let norms = [p.m.norm_inf(), p.m.norm_one()];
                let bound = (0..2)
                    .map(|t| {
                        let a = p.log_scale + norms[t].ln();
                        Self::endpoint(a, self.log_norms[t], k, l, true)
                    })
                    .fold(f64::INFINITY, f64::min);
                bound < best - TIE_TOL
            }
            SearchMode::Min => {
                let Some(mins) = self.log_min_sums else {
                    return false;
                };
                let sums = [min_row_sum(&p.m), min_col_sum(&p.m)];
                let bound = (0..2)
                    .map(|t| {
                        let a = p.log_scale + sums[t].ln();
                        Self::endpoint(a, mins[t], k, l, false)
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                bound > best + TIE_TOL
            }
        }
    }
}

struct Dfs<'a> {
    letters: Vec<Scaled>,
    opts: &'a SearchOptions,
    bounds: Option<Bounds>,
    word: Vec<usize>,
    evaluated: usize,
    incumbent: Incumbent,
}

impl Dfs<'_> {
    /// Visits the prenecklace `self.word` (length `t`, period `p`) whose
    /// product is `prod`.
    fn visit(&mut self, prod: &Scaled, t: usize, p: usize) -> Result<(), ProductError> {
        if p == t {
            self.evaluated += 1;
            if self.evaluated > self.opts.max_products {
                return Err(ProductError::TooManyProducts {
                    cap: self.opts.max_products,
                });
            }
            let value = prod.log_radius()? / t as f64;
            self.incumbent.offer(value, &self.word);
        }
        if t == self.opts.max_len {
            return Ok(());
        }
        if let (Some(b), Some(best)) = (&self.bounds, self.incumbent.value()) {
            if best.is_finite() && b.prune(self.opts.mode, prod, t, self.opts.max_len, best) {
                return Ok(());
            }
        }
        let start = self.word[t - p];
        for j in start..self.letters.len() {
            let child = prod.times(&self.letters[j]);
            self.word.push(j);
            let np = if j == start { p } else { t + 1 };
            let r = self.visit(&child, t + 1, np);
            self.word.pop();
            r?;
        }
        Ok(())
    }
}

fn necklace_search(family: &[Matrix], opts: &SearchOptions) -> Result<ProductCandidate, ProductError> {
    let letters: Vec<Scaled> = family.iter().cloned().map(Scaled::new).collect();
    let bounds = (opts.strategy == SearchStrategy::BranchBound).then(|| Bounds::new(family));
    let mut dfs = Dfs {
        letters,
        opts,
        bounds,
        word: Vec::with_capacity(opts.max_len),
        evaluated: 0,
        incumbent: Incumbent {
            mode: opts.mode,
            best: None,
        },
    };
    for j in 0..family.len() {
        let first = dfs.letters[j].clone();
        dfs.word.push(j);
        let r = dfs.visit(&first, 1, 1);
        dfs.word.pop();
        r?;
    }
    dfs.incumbent.finish()
}

fn two_block_search(family: &[Matrix], opts: &SearchOptions) -> Result<ProductCandidate, ProductError> {
    let k = family.len();
    let l = opts.max_len;
    let pairs = k * (k - 1) / 2;
    let total = k + pairs * (l * l.saturating_sub(1) / 2);
    if total > opts.max_products {
        return Err(ProductError::TooManyProducts {
            cap: opts.max_products,
        });
    }
    // powers[i][a] = B_i^a
    let powers: Vec<Vec<Scaled>> = family
        .iter()
        .map(|b| {
            let b = Scaled::new(b.clone());
            let mut out = vec![Scaled::new(Matrix::identity(b.m.dim())), b.clone()];
            for a in 2..l {
                let next = out[a - 1].times(&b);
                out.push(next);
            }
            out
        })
        .collect();
    let mut jobs: Vec<(usize, usize, usize, usize)> = (0..k).map(|i| (i, i, 1, 0)).collect();
    for i in 0..k {
        for j in i + 1..k {
            for a in 1..l {
                for b in 1..=(l - a) {
                    jobs.push((i, j, a, b));
                }
            }
        }
    }
    let values: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, j, a, b)| {
            let prod = if b == 0 {
                powers[i][a].clone()
            } else {
                powers[i][a].times(&powers[j][b])
            };
            Ok(prod.log_radius()? / (a + b) as f64)
        })
        .collect::<Result<_, ProductError>>()?;
    let mut inc = Incumbent {
        mode: opts.mode,
        best: None,
    };
    for (&(i, j, a, b), &v) in jobs.iter().zip(&values) {
        let mut word = vec![i; a];
        word.extend(std::iter::repeat_n(j, b));
        inc.offer(v, &word);
    }
    inc.finish()
}

/// Best word of length at most `opts.max_len` under `opts.mode`.
pub fn search_candidate(family: &[Matrix], opts: &SearchOptions) -> Result<ProductCandidate, ProductError> {
    if family.is_empty() || opts.max_len == 0 {
        return Err(ProductError::EmptyInput);
    }
    match opts.strategy {
        SearchStrategy::Exhaustive | SearchStrategy::BranchBound => necklace_search(family, opts),
        SearchStrategy::TwoBlockTemplate => two_block_search(family, opts),
    }
}
