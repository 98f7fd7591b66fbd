//! Dense two-phase primal simplex.
//!
//! The instances solved here are small (core programs with at most a few
//! thousand rows, goal programs with a handful of goals), so the solver
//! keeps a full tableau and uses Bland's rule throughout to rule out
//! cycling on degenerate vertices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feasibility tolerance on the phase-one objective and on the final
/// constraint check, relative to the largest right-hand side magnitude.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const REDUCED_COST_TOL: f64 = 1e-11;
const VERIFY_TOL: f64 = 1e-7;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    LessEq,
    #[serde(rename = ">=")]
    GreaterEq,
    #[serde(rename = "=", alias = "==")]
    Equal,
}

impl Relation {
    fn flipped(self) -> Self {
        match self {
            Relation::LessEq => Relation::GreaterEq,
            Relation::GreaterEq => Relation::LessEq,
            Relation::Equal => Relation::Equal,
        }
    }

    fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::LessEq => lhs <= rhs + tol,
            Relation::GreaterEq => lhs >= rhs - tol,
            Relation::Equal => (lhs - rhs).abs() <= tol,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `optimize objective·x` subject to row constraints and per-variable lower
/// bounds. A variable without a lower bound is free.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

impl LinearProgram {
    /// A program over `objective.len()` free variables with no constraints.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, coefficients: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
        self
    }

    pub fn bound_below(&mut self, var: usize, bound: f64) -> &mut Self {
        self.lower_bounds[var] = Some(bound);
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.lower_bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.lower_bounds.len(),
                context: "lower bounds",
            });
        }
        for row in &self.constraints {
            if row.coefficients.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.coefficients.len(),
                    context: "constraint row",
                });
            }
            if !row.rhs.is_finite() || row.coefficients.iter().any(|a| !a.is_finite()) {
                return Err(Error::InvalidInput("non-finite constraint data".into()));
            }
        }
        if self.objective.iter().any(|c| !c.is_finite())
            || self.lower_bounds.iter().flatten().any(|l| !l.is_finite())
        {
            return Err(Error::InvalidInput("non-finite objective or bound".into()));
        }
        Ok(())
    }

    /// Whether `x` satisfies every row and bound within `tol`.
    pub fn is_feasible_point(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.num_vars()
            && self
                .lower_bounds
                .iter()
                .zip(x)
                .all(|(l, &xi)| l.is_none_or(|l| xi >= l - tol))
            && self.constraints.iter().all(|row| {
                let lhs: f64 = row.coefficients.iter().zip(x).map(|(a, b)| a * b).sum();
                row.relation.holds(lhs, row.rhs, tol * row.rhs.abs().max(1.0))
            })
    }
}

// How a structural tableau column maps back to an original variable.
#[derive(Clone, Copy)]
struct ColumnOrigin {
    var: usize,
    sign: f64,
}

struct Tableau {
    rows: usize,
    cols: usize,
    // Row-major, `cols + 1` entries per row; the last is the right-hand side.
    data: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn stride(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.stride() + col]
    }

    fn rhs(&self, row: usize) -> f64 {
        self.at(row, self.cols)
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: &mut [f64]) {
        let stride = self.stride();
        let p = self.data[row * stride + col];
        for k in 0..stride {
            self.data[row * stride + k] /= p;
        }
        let pivot_row: Vec<f64> = self.data[row * stride..(row + 1) * stride].to_vec();
        for r in 0..self.rows {
            if r == row {
                continue;
            }
            let factor = self.data[r * stride + col];
            if factor != 0.0 {
                for (k, &pk) in pivot_row.iter().enumerate() {
                    self.data[r * stride + k] -= factor * pk;
                }
                self.data[r * stride + col] = 0.0;
            }
        }
        let factor = reduced[col];
        if factor != 0.0 {
            for (k, &pk) in pivot_row.iter().enumerate() {
                reduced[k] -= factor * pk;
            }
            reduced[col] = 0.0;
        }
        self.basis[row] = col;
    }

    fn remove_row(&mut self, row: usize) {
        let stride = self.stride();
        self.data.drain(row * stride..(row + 1) * stride);
        self.basis.remove(row);
        self.rows -= 1;
    }

    // Reduced costs (and negated objective in the last slot) for `cost`.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let stride = self.stride();
        let mut reduced = vec![0.0; stride];
        reduced[..self.cols].copy_from_slice(&cost[..self.cols]);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * stride..(r + 1) * stride];
                for (rk, &a) in reduced.iter_mut().zip(row) {
                    *rk -= cb * a;
                }
            }
        }
        reduced
    }

    /// Minimizes `cost` over the current basis using Bland's rule. Columns
    /// at index `>= allowed` never enter. Returns false when unbounded.
    fn minimize(&mut self, cost: &[f64], allowed: usize, max_iter: usize) -> Result<bool> {
        let mut reduced = self.reduced_costs(cost);
        for _ in 0..max_iter {
            let entering = (0..allowed).find(|&j| reduced[j] < -REDUCED_COST_TOL);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, col);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((best, best_ratio)) => {
                            let tie = (ratio - best_ratio).abs() <= 1e-12 * best_ratio.max(1.0);
                            if (!tie && ratio < best_ratio)
                                || (tie && self.basis[r] < self.basis[best])
                            {
                                Some((r, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(false);
            };
            self.pivot(row, col, &mut reduced);
        }
        Err(Error::Solver(format!(
            "iteration limit of {max_iter} pivots reached"
        )))
    }
}

/// Solves `lp` with a dense two-phase simplex.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();

    let mut origins = Vec::new();
    for (var, bound) in lp.lower_bounds.iter().enumerate() {
        origins.push(ColumnOrigin { var, sign: 1.0 });
        if bound.is_none() {
            origins.push(ColumnOrigin { var, sign: -1.0 });
        }
    }
    let structural = origins.len();
    let shift: Vec<f64> = lp.lower_bounds.iter().map(|l| l.unwrap_or(0.0)).collect();

    // Normalize rows to non-negative right-hand sides.
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(lp.constraints.len());
    for c in &lp.constraints {
        let mut coeffs: Vec<f64> = origins
            .iter()
            .map(|o| o.sign * c.coefficients[o.var])
            .collect();
        let mut rhs = c.rhs - c.coefficients.iter().zip(&shift).map(|(a, s)| a * s).sum::<f64>();
        let mut relation = c.relation;
        if rhs < 0.0 {
            coeffs.iter_mut().for_each(|a| *a = -*a);
            rhs = -rhs;
            relation = relation.flipped();
        }
        rows.push((coeffs, relation, rhs));
    }

    let slack_count = rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::Equal)
        .count();
    let artificial_count = rows
        .iter()
        .filter(|(_, rel, _)| *rel != Relation::LessEq)
        .count();
    let first_artificial = structural + slack_count;
    let cols = first_artificial + artificial_count;
    let m = rows.len();

    let mut tableau = Tableau {
        rows: m,
        cols,
        data: vec![0.0; m * (cols + 1)],
        basis: vec![0; m],
    };
    let stride = cols + 1;
    let mut next_slack = structural;
    let mut next_artificial = first_artificial;
    let mut scale: f64 = 1.0;
    for (r, (coeffs, relation, rhs)) in rows.iter().enumerate() {
        tableau.data[r * stride..r * stride + structural].copy_from_slice(coeffs);
        tableau.data[r * stride + cols] = *rhs;
        scale = scale.max(rhs.abs());
        match relation {
            Relation::LessEq => {
                tableau.data[r * stride + next_slack] = 1.0;
                tableau.basis[r] = next_slack;
                next_slack += 1;
            }
            Relation::GreaterEq => {
                tableau.data[r * stride + next_slack] = -1.0;
                next_slack += 1;
                tableau.data[r * stride + next_artificial] = 1.0;
                tableau.basis[r] = next_artificial;
                next_artificial += 1;
            }
            Relation::Equal => {
                tableau.data[r * stride + next_artificial] = 1.0;
                tableau.basis[r] = next_artificial;
                next_artificial += 1;
            }
        }
    }

    let max_iter = 50_000 + 50 * (m + cols);

    if artificial_count > 0 {
        let mut phase_one = vec![0.0; cols];
        phase_one[first_artificial..].iter_mut().for_each(|c| *c = 1.0);
        // Phase one is bounded below by zero.
        tableau.minimize(&phase_one, cols, max_iter)?;
        let infeasibility: f64 = (0..tableau.rows)
            .filter(|&r| tableau.basis[r] >= first_artificial)
            .map(|r| tableau.rhs(r))
            .sum();
        if infeasibility > FEASIBILITY_TOL * scale {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < tableau.rows {
            if tableau.basis[r] >= first_artificial {
                let replacement = (0..first_artificial).find(|&k| tableau.at(r, k).abs() > 1e-9);
                match replacement {
                    Some(k) => {
                        let mut scratch = vec![0.0; stride];
                        tableau.pivot(r, k, &mut scratch);
                    }
                    None => {
                        tableau.remove_row(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    let direction = match lp.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; cols];
    for (k, o) in origins.iter().enumerate() {
        cost[k] = direction * o.sign * lp.objective[o.var];
    }
    if !tableau.minimize(&cost, first_artificial, max_iter)? {
        return Ok(LpOutcome::Unbounded);
    }

    let mut x = shift;
    for r in 0..tableau.rows {
        let col = tableau.basis[r];
        if col < structural {
            let o = origins[col];
            x[o.var] += o.sign * tableau.rhs(r);
        }
    }
    if !lp.is_feasible_point(&x, VERIFY_TOL) {
        return Err(Error::Solver(
            "final basis violates the constraints beyond tolerance".into(),
        ));
    }
    let objective = lp.objective.iter().zip(&x).map(|(c, xi)| c * xi).sum();
    debug_assert_eq!(x.len(), n);
    Ok(LpOutcome::Optimal { x, objective })
}
