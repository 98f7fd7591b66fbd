//! Core membership, core non-emptiness, convexity and shared-value
//! classification for characteristic-function games.

use serde::{Deserialize, Serialize};

use crate::coalition::{check_agent_count, CharacteristicFunction, Coalition, MAX_EXHAUSTIVE_AGENTS};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Relation, Sense};

/// Default tolerance for core and convexity inequalities.
pub const DEFAULT_TOL: f64 = 1e-9;

const MAX_CUT_ROUNDS: usize = 10_000;

/// One payoff per agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PayoffVector(Vec<f64>);

impl PayoffVector {
    pub fn new(payoffs: Vec<f64>) -> Result<Self> {
        if payoffs.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidInput("payoffs must be finite".into()));
        }
        Ok(PayoffVector(payoffs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PayoffVector(self.0.iter().map(|u| u * factor).collect())
    }

    /// Payoff collected by the members of `coalition`.
    pub fn coalition_total(&self, coalition: Coalition) -> f64 {
        coalition.members().map(|i| self.0[i]).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameClassification {
    pub convex: bool,
    pub core_nonempty: bool,
    pub core_witness: Option<PayoffVector>,
    pub sustainable: bool,
    pub shared_value: bool,
}

pub fn is_in_core(u: &PayoffVector, v: &CharacteristicFunction) -> Result<bool> {
    is_in_core_with_tol(u, v, DEFAULT_TOL)
}

/// Efficiency within `tol·max(1, |v(A)|)` and every tabulated coalition
/// receiving at least its value minus `tol`.
pub fn is_in_core_with_tol(u: &PayoffVector, v: &CharacteristicFunction, tol: f64) -> Result<bool> {
    if u.len() != v.n() {
        return Err(Error::DimensionMismatch {
            expected: v.n(),
            got: u.len(),
            context: "payoff vector",
        });
    }
    let grand = v.grand_value()?;
    if (u.total() - grand).abs() > tol * grand.abs().max(1.0) {
        return Ok(false);
    }
    Ok(v
        .entries()
        .all(|(s, value)| u.coalition_total(s) >= value - tol))
}

/// The full core program: free payoffs, `Σu = v(A)` and one `≥` row per
/// non-empty proper coalition. Requires a complete table.
pub fn core_lp(v: &CharacteristicFunction) -> Result<LinearProgram> {
    let n = v.n();
    let table = v.dense()?;
    let grand = Coalition::grand(n);
    let mut lp = LinearProgram::new(Sense::Minimize, vec![0.0; n]);
    lp.constrain(vec![1.0; n], Relation::Equal, table[grand.mask() as usize]);
    for mask in 1..grand.mask() {
        lp.constrain(indicator(Coalition::from_mask(mask), n), Relation::GreaterEq, table[mask as usize]);
    }
    Ok(lp)
}

fn indicator(coalition: Coalition, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if coalition.contains(i) { 1.0 } else { 0.0 })
        .collect()
}

pub fn core_nonempty(v: &CharacteristicFunction) -> Result<Option<PayoffVector>> {
    core_nonempty_with_tol(v, DEFAULT_TOL)
}

/// Decides core non-emptiness and returns a witness when one exists.
///
/// Solves the core program by row generation: start from the efficiency
/// row and the singleton rows, solve, add the coalition rows the current
/// point violates by more than `tol`, and repeat. The restricted program is
/// a relaxation, so its infeasibility proves the core empty, and a point
/// violating no row is in the core.
pub fn core_nonempty_with_tol(
    v: &CharacteristicFunction,
    tol: f64,
) -> Result<Option<PayoffVector>> {
    let n = v.n();
    check_agent_count(n, MAX_EXHAUSTIVE_AGENTS)?;
    let table = v.dense()?;
    let size = table.len();
    let grand = Coalition::grand(n);

    let mut lp = LinearProgram::new(Sense::Minimize, vec![0.0; n]);
    lp.constrain(vec![1.0; n], Relation::Equal, table[size - 1]);
    let mut active = vec![false; size];
    active[grand.mask() as usize] = true;
    for i in 0..n {
        let s = Coalition::singleton(i);
        lp.constrain(indicator(s, n), Relation::GreaterEq, table[s.mask() as usize]);
        active[s.mask() as usize] = true;
    }

    let mut sums = vec![0.0; size];
    for _ in 0..MAX_CUT_ROUNDS {
        let u = match solve_lp(&lp)? {
            LpOutcome::Optimal { x, .. } => x,
            LpOutcome::Infeasible => return Ok(None),
            LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
        };
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + u[low];
        }
        let mut violated: Vec<(f64, usize)> = (1..size)
            .filter_map(|mask| {
                let gap = table[mask] - sums[mask];
                (gap > tol).then_some((gap, mask))
            })
            .collect();
        if violated.is_empty() {
            return Ok(Some(PayoffVector::new(u)?));
        }
        violated.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut added = 0;
        for &(_, mask) in violated.iter().take(2 * n) {
            if !active[mask] {
                active[mask] = true;
                lp.constrain(
                    indicator(Coalition::from_mask(mask as u32), n),
                    Relation::GreaterEq,
                    table[mask],
                );
                added += 1;
            }
        }
        if added == 0 {
            return Err(Error::Solver(
                "core row generation stalled on an already active row".into(),
            ));
        }
    }
    Err(Error::Solver("core row generation did not converge".into()))
}

pub fn is_convex(v: &CharacteristicFunction) -> Result<bool> {
    Ok(convexity_violation(v, DEFAULT_TOL)?.is_none())
}

/// First pair `(S, T)` (in mask order) with
/// `v(S ∪ T) + tol < v(S) + v(T) − v(S ∩ T)`, or `None` for a convex game.
pub fn convexity_violation(
    v: &CharacteristicFunction,
    tol: f64,
) -> Result<Option<(Coalition, Coalition)>> {
    check_agent_count(v.n(), MAX_EXHAUSTIVE_AGENTS)?;
    let table = v.dense()?;
    let size = table.len();
    for s in 0..size {
        for t in s + 1..size {
            let union = table[s | t];
            let meet = table[s & t];
            if union + meet < table[s] + table[t] - tol {
                return Ok(Some((
                    Coalition::from_mask(s as u32),
                    Coalition::from_mask(t as u32),
                )));
            }
        }
    }
    Ok(None)
}

pub fn classify(v: &CharacteristicFunction) -> Result<GameClassification> {
    classify_with_tol(v, DEFAULT_TOL)
}

/// A shared value game is sustainable and has a non-empty core.
pub fn classify_with_tol(v: &CharacteristicFunction, tol: f64) -> Result<GameClassification> {
    let convex = convexity_violation(v, tol)?.is_none();
    let core_witness = core_nonempty_with_tol(v, tol)?;
    let core_nonempty = core_witness.is_some();
    if convex && !core_nonempty {
        return Err(Error::Solver(
            "convex game reported with an empty core".into(),
        ));
    }
    let sustainable = v.sustainable();
    Ok(GameClassification {
        convex,
        core_nonempty,
        core_witness,
        sustainable,
        shared_value: sustainable && core_nonempty,
    })
}
