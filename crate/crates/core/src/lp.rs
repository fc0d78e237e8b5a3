//! Dense two-phase tableau simplex.
//!
//! Problems are stated as `maximize c·x  s.t.  A x = b`, with each variable either
//! sign-constrained (`x_j >= 0`) or free. Inequalities are expressed with explicit
//! slack variables through [`LpProblem::add_ge`] / [`LpProblem::add_le`].
//!
//! Pivoting uses Bland's rule (lowest-index entering column, lowest basic index on
//! ratio ties), so the solver is deterministic and does not cycle. The problems
//! produced by this crate have at most a few hundred columns; no attempt is made
//! at sparsity or refactorisation.

use crate::error::{Error, Result};

/// Reduced costs above this are treated as improving.
const OPT_TOL: f64 = 1e-10;
/// Smallest pivot magnitude accepted in the ratio test.
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    objective: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    nonneg: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; meaningful only when `status` is optimal.
    pub value: f64,
    pub point: Vec<f64>,
    /// Dual vector `y` with `Aᵀy >= c` on sign-constrained columns and `Aᵀy = c` on
    /// free ones, so that `b·y` bounds the primal value from above.
    pub certificate: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn without_point(status: LpStatus, n: usize, m: usize) -> Self {
        LpSolution {
            status,
            value: f64::NAN,
            point: vec![0.0; n],
            certificate: vec![0.0; m],
        }
    }
}

impl LpProblem {
    /// `num_vars` sign-constrained variables with zero objective and no rows.
    pub fn maximize(num_vars: usize) -> Self {
        LpProblem {
            objective: vec![0.0; num_vars],
            rows: Vec::new(),
            rhs: Vec::new(),
            nonneg: vec![true; num_vars],
        }
    }

    /// Dense constructor mirroring the mathematical statement of the problem.
    /// Variables listed in `nonneg_vars` are sign-constrained, the rest are free.
    pub fn from_dense(
        objective: Vec<f64>,
        matrix: Vec<Vec<f64>>,
        rhs: Vec<f64>,
        nonneg_vars: &[usize],
    ) -> Result<Self> {
        let n = objective.len();
        if matrix.len() != rhs.len() {
            return Err(Error::input(format!(
                "constraint matrix has {} rows but rhs has length {}",
                matrix.len(),
                rhs.len()
            )));
        }
        let mut nonneg = vec![false; n];
        for &j in nonneg_vars {
            if j >= n {
                return Err(Error::input(format!(
                    "nonnegative variable {j} out of range 0..{n}"
                )));
            }
            if nonneg[j] {
                return Err(Error::input(format!("variable {j} classified twice")));
            }
            nonneg[j] = true;
        }
        let mut rows = Vec::with_capacity(matrix.len());
        for (i, row) in matrix.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "row {i} has {} coefficients, expected {n}",
                    row.len()
                )));
            }
            rows.push(
                row.into_iter()
                    .enumerate()
                    .filter(|(_, a)| *a != 0.0)
                    .collect(),
            );
        }
        let problem = LpProblem {
            objective,
            rows,
            rhs,
            nonneg,
        };
        problem.check_finite()?;
        Ok(problem)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_var(&mut self, nonneg: bool) -> usize {
        self.objective.push(0.0);
        self.nonneg.push(nonneg);
        self.objective.len() - 1
    }

    pub fn set_free(&mut self, var: usize) {
        self.nonneg[var] = false;
    }

    pub fn set_objective(&mut self, var: usize, coeff: f64) {
        self.objective[var] = coeff;
    }

    pub fn add_eq(&mut self, coeffs: &[(usize, f64)], rhs: f64) {
        debug_assert!(coeffs.iter().all(|&(j, _)| j < self.num_vars()));
        self.rows
            .push(coeffs.iter().copied().filter(|(_, a)| *a != 0.0).collect());
        self.rhs.push(rhs);
    }

    /// `coeffs·x >= rhs`; returns the index of the new surplus variable.
    pub fn add_ge(&mut self, coeffs: &[(usize, f64)], rhs: f64) -> usize {
        let s = self.add_var(true);
        let mut row = coeffs.to_vec();
        row.push((s, -1.0));
        self.add_eq(&row, rhs);
        s
    }

    /// `coeffs·x <= rhs`; returns the index of the new slack variable.
    pub fn add_le(&mut self, coeffs: &[(usize, f64)], rhs: f64) -> usize {
        let s = self.add_var(true);
        let mut row = coeffs.to_vec();
        row.push((s, 1.0));
        self.add_eq(&row, rhs);
        s
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// `A x - b`, one entry per row.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().map(|&(j, a)| a * x[j]).sum::<f64>() - b)
            .collect()
    }

    /// `Aᵀ y`, one entry per variable.
    pub fn transpose_mul(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num_vars()];
        for (row, yi) in self.rows.iter().zip(y) {
            for &(j, a) in row {
                out[j] += a * yi;
            }
        }
        out
    }

    fn check_finite(&self) -> Result<()> {
        let ok = self
            .objective
            .iter()
            .chain(&self.rhs)
            .all(|v| v.is_finite())
            && self.rows.iter().flatten().all(|(_, a)| a.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::input("LP data contains non-finite coefficients"))
        }
    }
}

/// Solve `problem`; `feas_tol` bounds the primal residuals accepted on return.
pub fn solve(problem: &LpProblem, feas_tol: f64) -> Result<LpSolution> {
    problem.check_finite()?;
    let n = problem.num_vars();
    let m = problem.num_rows();

    // Column layout: one standard column per sign-constrained variable, a (+, -)
    // pair per free variable, then one artificial per row.
    let mut col_of = Vec::with_capacity(n);
    let mut n_std = 0usize;
    for j in 0..n {
        col_of.push(n_std);
        n_std += if problem.nonneg[j] { 1 } else { 2 };
    }
    let width = n_std + m + 1;
    let rhs_col = width - 1;

    let mut sign = vec![1.0; m];
    let mut tab = vec![0.0; m * width];
    for (i, row) in problem.rows.iter().enumerate() {
        if problem.rhs[i] < 0.0 {
            sign[i] = -1.0;
        }
        let t = &mut tab[i * width..(i + 1) * width];
        for &(j, a) in row {
            let a = a * sign[i];
            t[col_of[j]] += a;
            if !problem.nonneg[j] {
                t[col_of[j] + 1] -= a;
            }
        }
        t[n_std + i] = 1.0;
        t[rhs_col] = problem.rhs[i] * sign[i];
    }
    let mut cost = vec![0.0; n_std + m];
    for j in 0..n {
        cost[col_of[j]] = problem.objective[j];
        if !problem.nonneg[j] {
            cost[col_of[j] + 1] = -problem.objective[j];
        }
    }

    let mut tableau = Tableau {
        tab,
        m,
        width,
        basis: (n_std..n_std + m).collect(),
    };
    let scale = 1.0 + problem.rhs.iter().fold(0.0f64, |acc, b| acc.max(b.abs()));

    // Phase 1: maximise -(sum of artificials).
    let mut phase1 = vec![0.0; n_std + m];
    phase1[n_std..].iter_mut().for_each(|c| *c = -1.0);
    match tableau.optimize(&phase1, n_std + m)? {
        Outcome::Optimal => {}
        Outcome::Unbounded => {
            return Err(Error::Degenerate(
                "phase one reported an unbounded ray".into(),
            ));
        }
    }
    let infeasibility: f64 = tableau
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n_std)
        .map(|(i, _)| tableau.rhs(i))
        .sum();
    if infeasibility > feas_tol * scale {
        return Ok(LpSolution::without_point(LpStatus::Infeasible, n, m));
    }
    tableau.evict_artificials(n_std);

    // Phase 2 on the original objective; artificials may not re-enter.
    match tableau.optimize(&cost, n_std)? {
        Outcome::Optimal => {}
        Outcome::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded, n, m)),
    }

    let mut x_std = vec![0.0; n_std + m];
    for (i, &b) in tableau.basis.iter().enumerate() {
        x_std[b] = tableau.rhs(i);
    }
    let point: Vec<f64> = (0..n)
        .map(|j| {
            let c = col_of[j];
            if problem.nonneg[j] {
                x_std[c].max(0.0)
            } else {
                x_std[c] - x_std[c + 1]
            }
        })
        .collect();
    let value = problem
        .objective
        .iter()
        .zip(&point)
        .map(|(c, x)| c * x)
        .sum();

    // y'ᵀ = c_Bᵀ B⁻¹, and B⁻¹ sits in the artificial block of the final tableau.
    let certificate: Vec<f64> = (0..m)
        .map(|r| {
            let yr: f64 = tableau
                .basis
                .iter()
                .enumerate()
                .map(|(i, &b)| cost[b] * tableau.at(i, n_std + r))
                .sum();
            yr * sign[r]
        })
        .collect();

    let worst = problem
        .residual(&point)
        .iter()
        .fold(0.0f64, |acc, r| acc.max(r.abs()));
    if worst > feas_tol * scale {
        return Err(Error::Degenerate(format!(
            "primal residual {worst:.3e} exceeds tolerance after {m}x{n} solve"
        )));
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        value,
        point,
        certificate,
    })
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    tab: Vec<f64>,
    m: usize,
    width: usize,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.tab[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.tab[i * self.width + self.width - 1]
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.tab[i * self.width..(i + 1) * self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.tab[r * w + c];
        for v in &mut self.tab[r * w..(r + 1) * w] {
            *v /= p;
        }
        let pivot_row: Vec<f64> = self.row(r).to_vec();
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.tab[i * w + c];
            if f != 0.0 {
                let t = &mut self.tab[i * w..(i + 1) * w];
                for (v, pr) in t.iter_mut().zip(&pivot_row) {
                    *v -= f * pr;
                }
                t[c] = 0.0;
            }
        }
        self.basis[r] = c;
    }

    /// Bland-rule simplex on `cost`, allowing only columns `< enterable` to enter.
    fn optimize(&mut self, cost: &[f64], enterable: usize) -> Result<Outcome> {
        let mut in_basis = vec![false; self.width - 1];
        for &b in &self.basis {
            in_basis[b] = true;
        }
        for _ in 0..MAX_PIVOTS {
            // Reduced cost d_j = c_j - c_Bᵀ B⁻¹ A_j.
            let entering = (0..enterable).find(|&j| {
                if in_basis[j] {
                    return false;
                }
                let z: f64 = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| cost[b] * self.at(i, j))
                    .sum();
                cost[j] - z > OPT_TOL
            });
            let Some(c) = entering else {
                return Ok(Outcome::Optimal);
            };

            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        let tie = (ratio - best).abs() <= 1e-12 * (1.0 + best.abs());
                        if ratio < best && !tie || tie && self.basis[i] < self.basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Ok(Outcome::Unbounded);
            };
            in_basis[self.basis[r]] = false;
            in_basis[c] = true;
            self.pivot(r, c);
        }
        Err(Error::Degenerate(format!(
            "no convergence within {MAX_PIVOTS} pivots"
        )))
    }

    /// Pivot zero-level artificials out of the basis where a structural column allows it.
    /// Rows with no usable column are redundant and keep their artificial at zero.
    fn evict_artificials(&mut self, n_std: usize) {
        for i in 0..self.m {
            if self.basis[i] < n_std {
                continue;
            }
            let best = (0..n_std)
                .filter(|j| !self.basis.contains(j))
                .map(|j| (j, self.at(i, j).abs()))
                .filter(|&(_, a)| a > PIVOT_TOL)
                .fold(None::<(usize, f64)>, |acc, (j, a)| match acc {
                    Some((_, b)) if b >= a => acc,
                    _ => Some((j, a)),
                });
            if let Some((j, _)) = best {
                self.pivot(i, j);
            }
        }
    }
}
