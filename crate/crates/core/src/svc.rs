//! Shared value creation measured as frontier displacement.
//!
//! Without targets, creation is the gain in area under a bicriteria
//! frontier (or hypervolume dominated by a point set in higher
//! dimensions). With targets, it is the reduction of a goal-programming
//! objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::Frontier;

/// Threshold above which a displacement counts as value creation.
pub const CREATION_TOL: f64 = 1e-9;
pub const MAX_EXACT_POINTS: usize = 20;
pub const MONTE_CARLO_SAMPLES: usize = 1_000_000;
pub const MIN_DIMENSION: usize = 2;
pub const MAX_DIMENSION: usize = 6;

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvcReport {
    pub auc_before: f64,
    pub auc_after: f64,
    pub svc: f64,
    pub created: bool,
}

impl SvcReport {
    fn from_areas(before: f64, after: f64) -> Self {
        let svc = after - before;
        SvcReport {
            auc_before: before,
            auc_after: after,
            svc,
            created: svc > CREATION_TOL,
        }
    }
}

/// Area under the frontier over `θ1 ∈ [0, 1]`.
///
/// `1 − θ1^k` integrates to `k / (k + 1)`; sampled frontiers use the
/// trapezoid rule on their own points and must span the whole interval.
pub fn auc(frontier: &Frontier) -> Result<f64> {
    match frontier {
        Frontier::Power { k } => Ok(k / (k + 1.0)),
        Frontier::Sampled { points } => {
            let (lo, hi) = frontier.domain();
            if lo != 0.0 || hi != 1.0 {
                return Err(Error::InvalidFrontier(format!(
                    "area needs theta1 samples spanning [0, 1], got [{lo}, {hi}]"
                )));
            }
            Ok(points
                .windows(2)
                .map(|w| 0.5 * (w[1].theta1 - w[0].theta1) * (w[0].theta2 + w[1].theta2))
                .sum())
        }
    }
}

/// Creation without targets: `AUC(after) − AUC(before)`. A negative value
/// reports destruction rather than failing.
pub fn svc_without_targets(before: &Frontier, after: &Frontier) -> Result<SvcReport> {
    Ok(SvcReport::from_areas(auc(before)?, auc(after)?))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSvc {
    pub svc: f64,
    pub created: bool,
}

/// Creation with targets: the reduction `g − g′` of a minimized goal
/// programming objective.
pub fn svc_with_targets(g_before: f64, g_after: f64) -> TargetSvc {
    let svc = g_before - g_after;
    TargetSvc {
        svc,
        created: svc > CREATION_TOL,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypervolume {
    pub volume: f64,
    /// Zero for exact results.
    pub std_error: f64,
    pub exact: bool,
}

fn validate_points(points: &[Vec<f64>], dim: usize) -> Result<()> {
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&dim) {
        return Err(Error::Capacity {
            what: "hypervolume dimension",
            got: dim,
            max: MAX_DIMENSION,
        });
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.len(),
                context: "hypervolume point",
            });
        }
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidInput(format!(
                "hypervolume point {p:?} leaves the unit cube"
            )));
        }
    }
    Ok(())
}

/// Volume of the union of boxes `[0, p]`, with the reference point at the
/// origin of the normalized space.
///
/// Exact for up to [`MAX_EXACT_POINTS`] points, otherwise a seeded Monte
/// Carlo estimate with [`MONTE_CARLO_SAMPLES`] samples.
pub fn hypervolume(points: &[Vec<f64>], dim: usize, seed: u64) -> Result<Hypervolume> {
    if points.len() <= MAX_EXACT_POINTS {
        hypervolume_exact(points, dim)
    } else {
        hypervolume_monte_carlo(points, dim, MONTE_CARLO_SAMPLES, seed)
    }
}

/// Inclusion–exclusion over all non-empty subsets of `points`.
pub fn hypervolume_exact(points: &[Vec<f64>], dim: usize) -> Result<Hypervolume> {
    validate_points(points, dim)?;
    if points.len() > MAX_EXACT_POINTS {
        return Err(Error::Capacity {
            what: "exact hypervolume point count",
            got: points.len(),
            max: MAX_EXACT_POINTS,
        });
    }
    let m = points.len();
    // Component-wise minimum of each subset, built from the subset without
    // its lowest member.
    let mut corner = vec![1.0f64; dim << m];
    let mut volume = 0.0;
    for mask in 1usize..1 << m {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut boxed = 1.0;
        for d in 0..dim {
            let x = corner[rest * dim + d].min(points[low][d]);
            corner[mask * dim + d] = x;
            boxed *= x;
        }
        if mask.count_ones() % 2 == 1 {
            volume += boxed;
        } else {
            volume -= boxed;
        }
    }
    Ok(Hypervolume {
        volume,
        std_error: 0.0,
        exact: true,
    })
}

pub fn hypervolume_monte_carlo(
    points: &[Vec<f64>],
    dim: usize,
    samples: usize,
    seed: u64,
) -> Result<Hypervolume> {
    validate_points(points, dim)?;
    if samples == 0 {
        return Err(Error::Parameter("Monte Carlo needs at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = vec![0.0; dim];
    let mut hits = 0usize;
    for _ in 0..samples {
        for x in sample.iter_mut() {
            *x = rng.random::<f64>();
        }
        if points
            .iter()
            .any(|p| p.iter().zip(&sample).all(|(pi, si)| si <= pi))
        {
            hits += 1;
        }
    }
    let share = hits as f64 / samples as f64;
    Ok(Hypervolume {
        volume: share,
        std_error: (share * (1.0 - share) / samples as f64).sqrt(),
        exact: false,
    })
}
