//! Dense two-phase primal simplex on a full tableau.
//!
//! Entering columns are chosen by the most negative reduced cost; after a run
//! of degenerate pivots the rule switches to Bland's smallest-index rule,
//! which cannot cycle. The problems solved here have few rows (the state
//! dimension plus one or two) and up to a few thousand columns.

use serde::{Deserialize, Serialize};

use super::LpError;

/// Primal feasibility tolerance.
pub const TOL_LP: f64 = 1e-9;
const TOL_PIVOT: f64 = 1e-11;
const TOL_COST: f64 = 1e-11;
const DEGENERATE_STREAK: usize = 30;

/// `min cᵀx` subject to equality rows, `≤` rows and per-variable lower
/// bounds (`None` marks a free variable).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub eq_matrix: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub le_matrix: Vec<Vec<f64>>,
    pub le_rhs: Vec<f64>,
    pub lower_bounds: Vec<Option<f64>>,
}

impl LpProblem {
    /// Minimization problem with all variables bounded below by zero.
    pub fn minimize(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            objective,
            lower_bounds: vec![Some(0.0); n],
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn eq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_matrix.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    pub fn le(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.le_matrix.push(row);
        self.le_rhs.push(rhs);
        self
    }

    pub fn ge(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.le(row.into_iter().map(|a| -a).collect(), -rhs)
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.lower_bounds[var] = None;
        self
    }

    pub fn set_lower(&mut self, var: usize, bound: f64) -> &mut Self {
        self.lower_bounds[var] = Some(bound);
        self
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower_bounds.len() != n {
            return Err(LpError::DimensionMismatch(format!(
                "{} lower bounds for {} variables",
                self.lower_bounds.len(),
                n
            )));
        }
        if self.eq_matrix.len() != self.eq_rhs.len() || self.le_matrix.len() != self.le_rhs.len() {
            return Err(LpError::DimensionMismatch(
                "constraint rows and right-hand sides differ in length".into(),
            ));
        }
        for (kind, rows) in [("equality", &self.eq_matrix), ("inequality", &self.le_matrix)] {
            if let Some(i) = rows.iter().position(|r| r.len() != n) {
                return Err(LpError::DimensionMismatch(format!(
                    "{kind} row {i} has {} coefficients, expected {n}",
                    rows[i].len()
                )));
            }
        }
        let finite = self.objective.iter().all(|x| x.is_finite())
            && self.eq_rhs.iter().chain(&self.le_rhs).all(|x| x.is_finite())
            && self
                .eq_matrix
                .iter()
                .chain(&self.le_matrix)
                .all(|r| r.iter().all(|x| x.is_finite()))
            && self.lower_bounds.iter().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(LpError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective_value: f64,
    pub variables: Vec<f64>,
}

impl LpSolution {
    fn without_point(status: LpStatus) -> Self {
        let objective_value = match status {
            LpStatus::Infeasible => f64::INFINITY,
            LpStatus::Unbounded => f64::NEG_INFINITY,
            LpStatus::Optimal => f64::NAN,
        };
        Self {
            status,
            objective_value,
            variables: Vec::new(),
        }
    }
}

/// How an original variable maps onto standard-form columns.
enum ColumnMap {
    Shifted { col: usize, lower: f64 },
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: usize,
    cols: usize,
    // rows × (cols + 1); the last column holds the right-hand side
    t: Vec<f64>,
    basis: Vec<usize>,
    cost_row: Vec<f64>,
}

impl Tableau {
    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * (self.cols + 1) + j]
    }

    #[inline]
    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn set_costs(&mut self, costs: &[f64]) {
        let w = self.cols + 1;
        let mut r: Vec<f64> = costs.to_vec();
        r.push(0.0);
        for i in 0..self.rows {
            let cb = costs[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    r[j] -= cb * self.t[i * w + j];
                }
            }
        }
        self.cost_row = r;
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let piv = self.t[pr * w + pc];
        for j in 0..w {
            self.t[pr * w + j] /= piv;
        }
        self.t[pr * w + pc] = 1.0;
        let prow: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for i in 0..self.rows {
            if i == pr {
                continue;
            }
            let f = self.t[i * w + pc];
            if f != 0.0 {
                let row = &mut self.t[i * w..(i + 1) * w];
                for (a, b) in row.iter_mut().zip(&prow) {
                    *a -= f * b;
                }
                row[pc] = 0.0;
            }
        }
        let f = self.cost_row[pc];
        if f != 0.0 {
            for (a, b) in self.cost_row.iter_mut().zip(&prow) {
                *a -= f * b;
            }
            self.cost_row[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Runs simplex iterations over the allowed columns.
    fn optimize(&mut self, allowed: &[bool], max_iters: usize) -> Result<LpStatus, LpError> {
        let mut degenerate = 0usize;
        for _ in 0..max_iters {
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut entering = None;
            let mut best = -TOL_COST;
            for j in 0..self.cols {
                if !allowed[j] {
                    continue;
                }
                let r = self.cost_row[j];
                if r < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = r;
                }
            }
            let Some(e) = entering else {
                return Ok(LpStatus::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, e);
                if a > TOL_PIVOT {
                    let ratio = self.rhs(i).max(0.0) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= 1e-12 * lr.abs().max(1.0);
                            if ratio < lr && !tie
                                || tie && self.basis[i] < self.basis[li]
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((pr, ratio)) = leave else {
                return Ok(LpStatus::Unbounded);
            };
            if ratio <= 1e-14 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(pr, e);
        }
        Err(LpError::IterationLimit(max_iters))
    }
}

/// Solves `p` with the two-phase primal simplex method.
pub fn solve_lp(p: &LpProblem) -> Result<LpSolution, LpError> {
    p.validate()?;
    let n = p.num_vars();

    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    for lb in &p.lower_bounds {
        match lb {
            Some(l) => {
                maps.push(ColumnMap::Shifted { col: ncols, lower: *l });
                ncols += 1;
            }
            None => {
                maps.push(ColumnMap::Split {
                    pos: ncols,
                    neg: ncols + 1,
                });
                ncols += 2;
            }
        }
    }
    let n_struct = ncols;
    let n_eq = p.eq_matrix.len();
    let n_le = p.le_matrix.len();
    let m = n_eq + n_le;

    // Standard-form rows over structural columns plus adjusted rhs.
    let expand = |row: &[f64], rhs: f64| -> (Vec<f64>, f64) {
        let mut out = vec![0.0; n_struct];
        let mut b = rhs;
        for (j, map) in maps.iter().enumerate() {
            match *map {
                ColumnMap::Shifted { col, lower } => {
                    out[col] = row[j];
                    b -= row[j] * lower;
                }
                ColumnMap::Split { pos, neg } => {
                    out[pos] = row[j];
                    out[neg] = -row[j];
                }
            }
        }
        (out, b)
    };

    let mut std_rows: Vec<(Vec<f64>, f64, Option<f64>)> = Vec::with_capacity(m);
    for (r, &b) in p.eq_matrix.iter().zip(&p.eq_rhs) {
        let (row, b) = expand(r, b);
        std_rows.push((row, b, None));
    }
    for (r, &b) in p.le_matrix.iter().zip(&p.le_rhs) {
        let (row, b) = expand(r, b);
        std_rows.push((row, b, Some(1.0)));
    }

    let n_slack = n_le;
    let slack_base = n_struct;
    let art_base = n_struct + n_slack;
    let mut needs_art = Vec::with_capacity(m);
    for (row, b, slack) in std_rows.iter_mut() {
        if *b < 0.0 {
            row.iter_mut().for_each(|a| *a = -*a);
            *b = -*b;
            if let Some(s) = slack {
                *s = -*s;
            }
        }
        needs_art.push(!matches!(slack, Some(s) if *s > 0.0));
    }
    let n_art = needs_art.iter().filter(|&&a| a).count();
    let cols = art_base + n_art;
    let w = cols + 1;

    let mut t = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let mut le_idx = 0;
    let mut art_idx = 0;
    for (i, (row, b, slack)) in std_rows.iter().enumerate() {
        t[i * w..i * w + n_struct].copy_from_slice(row);
        t[i * w + cols] = *b;
        if let Some(s) = slack {
            t[i * w + slack_base + le_idx] = *s;
            if !needs_art[i] {
                basis[i] = slack_base + le_idx;
            }
            le_idx += 1;
        }
        if needs_art[i] {
            t[i * w + art_base + art_idx] = 1.0;
            basis[i] = art_base + art_idx;
            art_idx += 1;
        }
    }

    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        basis,
        cost_row: Vec::new(),
    };
    let max_iters = 50_000 + 50 * (m + cols);

    if n_art > 0 {
        let mut c1 = vec![0.0; cols];
        c1[art_base..].iter_mut().for_each(|c| *c = 1.0);
        tab.set_costs(&c1);
        let allowed = vec![true; cols];
        tab.optimize(&allowed, max_iters)?;
        let infeas: f64 = (0..m)
            .filter(|&i| tab.basis[i] >= art_base)
            .map(|i| tab.rhs(i))
            .sum();
        let scale = std_rows.iter().map(|r| r.1).fold(1.0, f64::max);
        if infeas > TOL_LP * scale {
            return Ok(LpSolution::without_point(LpStatus::Infeasible));
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if tab.basis[i] >= art_base {
                let col = (0..art_base)
                    .filter(|&j| tab.at(i, j).abs() > 1e-9)
                    .max_by(|&a, &b| tab.at(i, a).abs().total_cmp(&tab.at(i, b).abs()));
                if let Some(j) = col {
                    tab.pivot(i, j);
                }
            }
        }
    }

    let mut c2 = vec![0.0; cols];
    for (j, map) in maps.iter().enumerate() {
        match *map {
            ColumnMap::Shifted { col, .. } => c2[col] = p.objective[j],
            ColumnMap::Split { pos, neg } => {
                c2[pos] = p.objective[j];
                c2[neg] = -p.objective[j];
            }
        }
    }
    tab.set_costs(&c2);
    let allowed: Vec<bool> = (0..cols).map(|j| j < art_base).collect();
    let status = tab.optimize(&allowed, max_iters)?;
    if status == LpStatus::Unbounded {
        return Ok(LpSolution::without_point(LpStatus::Unbounded));
    }

    let mut xs = vec![0.0; cols];
    for i in 0..m {
        xs[tab.basis[i]] = tab.rhs(i).max(0.0);
    }
    let variables: Vec<f64> = maps
        .iter()
        .map(|map| match *map {
            ColumnMap::Shifted { col, lower } => lower + xs[col],
            ColumnMap::Split { pos, neg } => xs[pos] - xs[neg],
        })
        .collect();
    let objective_value = p
        .objective
        .iter()
        .zip(&variables)
        .map(|(c, x)| c * x)
        .sum();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value,
        variables,
    })
}

/// Largest violation of the constraints of `p` at `x`.
pub fn primal_residual(p: &LpProblem, x: &[f64]) -> f64 {
    let dot = |r: &[f64]| r.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    let eq = p
        .eq_matrix
        .iter()
        .zip(&p.eq_rhs)
        .map(|(r, b)| (dot(r) - b).abs());
    let le = p
        .le_matrix
        .iter()
        .zip(&p.le_rhs)
        .map(|(r, b)| (dot(r) - b).max(0.0));
    let bounds = p
        .lower_bounds
        .iter()
        .zip(x)
        .map(|(l, v)| l.map_or(0.0, |l| (l - v).max(0.0)));
    eq.chain(le).chain(bounds).fold(0.0, f64::max)
}
