//! Compromise programming and weighted goal programming.
//!
//! Compromise programming works in normalized achievement space where each
//! criterion's anchor maps to 1 and its nadir to 0, so the ideal point is
//! `(1, ..., 1)`. Weights express the bargaining power of each agent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frontier::{Frontier, ThetaPoint};
use crate::lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Sense};

/// Slack allowed outside `[0, 1]` before a normalized value is rejected.
pub const NORMALIZE_TOL: f64 = 1e-9;
pub const ROOT_TOL: f64 = 1e-10;
pub const ROOT_MAX_ITER: usize = 200;
const SEARCH_TOL: f64 = 1e-10;
const SCAN_POINTS: usize = 2001;
const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub name: String,
    pub anchor: f64,
    pub nadir: f64,
    pub weight: f64,
}

impl CriterionSpec {
    pub fn new(name: impl Into<String>, anchor: f64, nadir: f64, weight: f64) -> Result<Self> {
        let spec = CriterionSpec {
            name: name.into(),
            anchor,
            nadir,
            weight,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// A criterion already expressed on the normalized `[0, 1]` scale.
    pub fn normalized(name: impl Into<String>, weight: f64) -> Result<Self> {
        Self::new(name, 1.0, 0.0, weight)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.anchor.is_finite() && self.nadir.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "criterion '{}' needs finite anchor and nadir",
                self.name
            )));
        }
        if self.anchor == self.nadir {
            return Err(Error::DegenerateRange(self.anchor));
        }
        if !(self.weight > 0.0 && self.weight <= 1.0) {
            return Err(Error::Parameter(format!(
                "criterion '{}' weight {} outside (0, 1]",
                self.name, self.weight
            )));
        }
        Ok(())
    }

    pub fn normalize(&self, value: f64) -> Result<f64> {
        normalize(value, self.nadir, self.anchor)
    }
}

/// Errors unless the weights of `specs` sum to 1 within 1e-9.
pub fn check_weight_sum(specs: &[CriterionSpec]) -> Result<()> {
    let total: f64 = specs.iter().map(|s| s.weight).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!(
            "criterion weights sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Maps `value` affinely so that `nadir → 0` and `anchor → 1`.
///
/// Results within [`NORMALIZE_TOL`] outside the unit interval are clamped;
/// anything further out is a range error.
pub fn normalize(value: f64, nadir: f64, anchor: f64) -> Result<f64> {
    if anchor == nadir {
        return Err(Error::DegenerateRange(anchor));
    }
    let theta = (value - nadir) / (anchor - nadir);
    if !(-NORMALIZE_TOL..=1.0 + NORMALIZE_TOL).contains(&theta) {
        return Err(Error::Range {
            value,
            low: nadir.min(anchor),
            high: nadir.max(anchor),
        });
    }
    Ok(theta.clamp(0.0, 1.0))
}

/// The metric parameter `h` of the distance family: any real `h ≥ 1`, or ∞.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum DistanceOrder {
    Finite(f64),
    Infinity,
}

impl DistanceOrder {
    pub const MANHATTAN: DistanceOrder = DistanceOrder::Finite(1.0);
    pub const CHEBYSHEV: DistanceOrder = DistanceOrder::Infinity;

    pub fn new(h: f64) -> Result<Self> {
        if h == f64::INFINITY {
            Ok(DistanceOrder::Infinity)
        } else if h.is_finite() && h >= 1.0 {
            Ok(DistanceOrder::Finite(h))
        } else {
            Err(Error::Parameter(format!("distance order h must be >= 1, got {h}")))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            DistanceOrder::Finite(h) => h,
            DistanceOrder::Infinity => f64::INFINITY,
        }
    }
}

impl FromStr for DistanceOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(DistanceOrder::Infinity),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::Parameter(format!("cannot parse distance order '{s}'")))
                .and_then(DistanceOrder::new),
        }
    }
}

impl fmt::Display for DistanceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceOrder::Finite(h) => write!(f, "{h}"),
            DistanceOrder::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for DistanceOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DistanceOrder::Finite(h) => serializer.serialize_f64(*h),
            DistanceOrder::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DistanceOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(h) => DistanceOrder::new(h),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

fn weighted_distance(theta: &[f64], weights: &[f64], h: DistanceOrder) -> f64 {
    let shortfalls = theta.iter().zip(weights).map(|(&t, &w)| w * (1.0 - t));
    match h {
        DistanceOrder::Infinity => shortfalls.fold(0.0, f64::max),
        DistanceOrder::Finite(1.0) => shortfalls.sum(),
        DistanceOrder::Finite(h) => shortfalls.map(|d| d.powf(h)).sum::<f64>().powf(1.0 / h),
    }
}

/// Weighted `L_h` distance from normalized achievements `theta` to the
/// ideal point.
///
/// Achievements above 1 (beyond the anchor) are rejected rather than
/// folded into an absolute value.
pub fn cp_distance(theta: &[f64], specs: &[CriterionSpec], h: DistanceOrder) -> Result<f64> {
    if theta.len() != specs.len() {
        return Err(Error::DimensionMismatch {
            expected: specs.len(),
            got: theta.len(),
            context: "normalized achievements",
        });
    }
    for &t in theta {
        if !(-NORMALIZE_TOL..=1.0 + NORMALIZE_TOL).contains(&t) {
            return Err(Error::Range {
                value: t,
                low: 0.0,
                high: 1.0,
            });
        }
    }
    let clamped: Vec<f64> = theta.iter().map(|t| t.clamp(0.0, 1.0)).collect();
    let weights: Vec<f64> = specs.iter().map(|s| s.weight).collect();
    Ok(weighted_distance(&clamped, &weights, h))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompromisePoint {
    pub point: ThetaPoint,
    pub distance: f64,
}

/// The compromise set is bounded by the `L1` and `L∞` solutions.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompromiseSet {
    pub manhattan: CompromisePoint,
    pub chebyshev: CompromisePoint,
}

fn bicriteria_weights(specs: &[CriterionSpec]) -> Result<[f64; 2]> {
    if specs.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: specs.len(),
            context: "bicriteria frontier",
        });
    }
    for s in specs {
        if !(s.weight.is_finite() && s.weight > 0.0) {
            return Err(Error::Parameter(format!(
                "criterion '{}' weight must be positive",
                s.name
            )));
        }
    }
    Ok([specs[0].weight, specs[1].weight])
}

// Golden-section minimization of a unimodal `f` on `[lo, hi]`.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..ROOT_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Frontier point nearest the ideal `(1, 1)` under the weighted `L_h`
/// distance.
///
/// Closed-form frontiers are scanned on a uniform grid and the best bracket
/// refined by golden-section search; sampled frontiers are refined segment
/// by segment (the distance is convex along each segment). When the
/// weighted balance point is as close as the minimizer found, it is
/// returned instead, so flat optima resolve to the balanced solution.
pub fn compromise_solution(
    frontier: &Frontier,
    specs: &[CriterionSpec],
    h: DistanceOrder,
) -> Result<CompromisePoint> {
    let weights = bicriteria_weights(specs)?;
    let distance = |p: ThetaPoint| weighted_distance(&[p.theta1, p.theta2], &weights, h);

    let best = match frontier {
        Frontier::Power { .. } => {
            let at = |t: f64| ThetaPoint::new(t, frontier.theta2_at(t).expect("t in [0, 1]"));
            let step = 1.0 / (SCAN_POINTS - 1) as f64;
            let (best_index, _) = (0..SCAN_POINTS)
                .map(|i| (i, distance(at(i as f64 * step))))
                .fold((0, f64::INFINITY), |acc, (i, d)| if d < acc.1 { (i, d) } else { acc });
            let lo = best_index.saturating_sub(1) as f64 * step;
            let hi = ((best_index + 1).min(SCAN_POINTS - 1) as f64 * step).min(1.0);
            let refined = at(golden_section(|t| distance(at(t)), lo, hi, SEARCH_TOL));
            let scanned = at(best_index as f64 * step);
            if distance(refined) <= distance(scanned) {
                refined
            } else {
                scanned
            }
        }
        Frontier::Sampled { points } => {
            let mut best = points[0];
            for pair in points.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let lerp = |s: f64| {
                    ThetaPoint::new(
                        a.theta1 + s * (b.theta1 - a.theta1),
                        a.theta2 + s * (b.theta2 - a.theta2),
                    )
                };
                let s = golden_section(|s| distance(lerp(s)), 0.0, 1.0, SEARCH_TOL);
                for candidate in [lerp(s), b] {
                    if distance(candidate) < distance(best) {
                        best = candidate;
                    }
                }
            }
            best
        }
    };

    let mut point = best;
    if let Ok(balanced) = balanced_solution(frontier, weights[0], weights[1]) {
        if distance(balanced) <= distance(best) + TIE_TOL {
            point = balanced;
        }
    }
    Ok(CompromisePoint {
        point,
        distance: distance(point),
    })
}

pub fn compromise_set(frontier: &Frontier, specs: &[CriterionSpec]) -> Result<CompromiseSet> {
    Ok(CompromiseSet {
        manhattan: compromise_solution(frontier, specs, DistanceOrder::MANHATTAN)?,
        chebyshev: compromise_solution(frontier, specs, DistanceOrder::CHEBYSHEV)?,
    })
}

/// Frontier point where weighted shortfalls from the ideal are equal,
/// `w1(1 − θ1) = w2(1 − θ2)`.
///
/// Bisection on `θ1` for the crossing of the frontier with the line
/// `θ2 = 1 − (w1/w2)(1 − θ1)`.
pub fn balanced_solution(frontier: &Frontier, w1: f64, w2: f64) -> Result<ThetaPoint> {
    for w in [w1, w2] {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parameter(format!("weights must be positive, got {w}")));
        }
    }
    let ratio = w1 / w2;
    let gap = |t: f64| frontier.theta2_at(t).expect("t within domain") - (1.0 - ratio * (1.0 - t));
    let (mut lo, mut hi) = frontier.domain();
    let g_lo = gap(lo);
    let g_hi = gap(hi);
    // The frontier is non-increasing and the line strictly increasing, so
    // the gap is strictly decreasing.
    let root = if g_lo == 0.0 {
        lo
    } else if g_hi == 0.0 {
        hi
    } else if g_lo < 0.0 || g_hi > 0.0 {
        return Err(Error::NoBalancedSolution);
    } else {
        // Bisect until the gap vanishes or the bracket stops shrinking,
        // both well inside ROOT_TOL.
        let mut root = 0.5 * (lo + hi);
        for _ in 0..ROOT_MAX_ITER {
            let g = gap(root);
            if g == 0.0 {
                break;
            }
            if g > 0.0 {
                lo = root;
            } else {
                hi = root;
            }
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            root = mid;
        }
        root
    };
    Ok(ThetaPoint::new(
        root,
        frontier.theta2_at(root).expect("root within domain"),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoalSpec {
    pub name: String,
    pub target: f64,
    pub weight: f64,
}

impl GoalSpec {
    pub fn new(name: impl Into<String>, target: f64, weight: f64) -> Self {
        GoalSpec {
            name: name.into(),
            target,
            weight,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpSolution {
    pub achieved: Vec<f64>,
    pub over: Vec<f64>,
    pub under: Vec<f64>,
    pub objective: f64,
}

/// Weighted goal programming.
///
/// Minimizes `Σ w_j (δ⁺_j + δ⁻_j) / |b_j|` subject to
/// `u_j = b_j + δ⁺_j − δ⁻_j` and the linear `region` constraints on `u`.
/// Dividing by `|b_j|` keeps negative targets from flipping the sense of
/// their term.
pub fn gp_solve(goals: &[GoalSpec], region: &[Constraint]) -> Result<GpSolution> {
    let n = goals.len();
    if n == 0 {
        return Err(Error::InvalidInput("no goals".into()));
    }
    for g in goals {
        if g.target == 0.0 {
            return Err(Error::ZeroTarget(g.name.clone()));
        }
        if !(g.target.is_finite() && g.weight.is_finite() && g.weight >= 0.0) {
            return Err(Error::Parameter(format!(
                "goal '{}' needs a finite target and a non-negative weight",
                g.name
            )));
        }
    }

    // Columns: u (free) | δ⁺ | δ⁻.
    let mut objective = vec![0.0; 3 * n];
    for (j, g) in goals.iter().enumerate() {
        let c = g.weight / g.target.abs();
        objective[n + j] = c;
        objective[2 * n + j] = c;
    }
    let mut lp = LinearProgram::new(Sense::Minimize, objective);
    for (j, g) in goals.iter().enumerate() {
        let mut row = vec![0.0; 3 * n];
        row[j] = 1.0;
        row[n + j] = -1.0;
        row[2 * n + j] = 1.0;
        lp.constrain(row, crate::lp::Relation::Equal, g.target);
        lp.bound_below(n + j, 0.0).bound_below(2 * n + j, 0.0);
    }
    for c in region {
        if c.coefficients.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.coefficients.len(),
                context: "goal region constraint",
            });
        }
        let mut row = c.coefficients.clone();
        row.resize(3 * n, 0.0);
        lp.constrain(row, c.relation, c.rhs);
    }

    let x = match solve_lp(&lp)? {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Infeasible => return Err(Error::Infeasible),
        LpOutcome::Unbounded => {
            return Err(Error::Solver("goal program reported unbounded".into()))
        }
    };
    let achieved = x[..n].to_vec();
    // Net out the deviations so at most one of each pair is non-zero.
    let over: Vec<f64> = goals
        .iter()
        .zip(&achieved)
        .map(|(g, &u)| (u - g.target).max(0.0))
        .collect();
    let under: Vec<f64> = goals
        .iter()
        .zip(&achieved)
        .map(|(g, &u)| (g.target - u).max(0.0))
        .collect();
    let objective = goals
        .iter()
        .enumerate()
        .map(|(j, g)| g.weight * (over[j] + under[j]) / g.target.abs())
        .sum();
    Ok(GpSolution {
        achieved,
        over,
        under,
        objective,
    })
}
