//! Bicriteria trade-off curves in the normalized unit square.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(θ1, θ2)` in normalized achievement space.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub theta1: f64,
    pub theta2: f64,
}

impl ThetaPoint {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        ThetaPoint { theta1, theta2 }
    }
}

/// Efficient frontier `θ2 = z(θ1)`.
///
/// Either the closed form `θ2 = 1 − θ1^k` on `[0, 1]`, or a list of sample
/// points joined by straight segments. Sampled frontiers need strictly
/// increasing `θ1` and non-increasing `θ2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrontierSpec", into = "FrontierSpec")]
pub enum Frontier {
    Power { k: f64 },
    Sampled { points: Vec<ThetaPoint> },
}

/// Wire form: `{"form": "power", "k": 2}` or `{"points": [[θ1, θ2], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrontierSpec {
    Power { form: FormTag, k: f64 },
    Points { points: Vec<[f64; 2]> },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormTag {
    Power,
}

impl TryFrom<FrontierSpec> for Frontier {
    type Error = Error;

    fn try_from(spec: FrontierSpec) -> Result<Self> {
        match spec {
            FrontierSpec::Power { k, .. } => Frontier::power(k),
            FrontierSpec::Points { points } => Frontier::sampled(
                points.into_iter().map(|[a, b]| ThetaPoint::new(a, b)).collect(),
            ),
        }
    }
}

impl From<Frontier> for FrontierSpec {
    fn from(frontier: Frontier) -> Self {
        match frontier {
            Frontier::Power { k } => FrontierSpec::Power {
                form: FormTag::Power,
                k,
            },
            Frontier::Sampled { points } => FrontierSpec::Points {
                points: points.iter().map(|p| [p.theta1, p.theta2]).collect(),
            },
        }
    }
}

impl Frontier {
    pub fn power(k: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidFrontier(format!(
                "power exponent must be positive and finite, got {k}"
            )));
        }
        Ok(Frontier::Power { k })
    }

    pub fn sampled(points: Vec<ThetaPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidFrontier("no sample points".into()));
        }
        for p in &points {
            for x in [p.theta1, p.theta2] {
                if !(0.0..=1.0).contains(&x) {
                    return Err(Error::InvalidFrontier(format!(
                        "coordinate {x} outside [0, 1]"
                    )));
                }
            }
        }
        for pair in points.windows(2) {
            if pair[1].theta1 <= pair[0].theta1 {
                return Err(Error::InvalidFrontier(
                    "theta1 must be strictly increasing".into(),
                ));
            }
            if pair[1].theta2 > pair[0].theta2 {
                return Err(Error::InvalidFrontier(
                    "theta2 must not increase along the frontier".into(),
                ));
            }
        }
        Ok(Frontier::Sampled { points })
    }

    /// Range of `θ1` over which the frontier is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Frontier::Power { .. } => (0.0, 1.0),
            Frontier::Sampled { points } => (points[0].theta1, points[points.len() - 1].theta1),
        }
    }

    /// `θ2` at `theta1`, or `None` outside the domain.
    pub fn theta2_at(&self, theta1: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&theta1) {
            return None;
        }
        match self {
            Frontier::Power { k } => Some(1.0 - theta1.powf(*k)),
            Frontier::Sampled { points } => {
                let i = points.partition_point(|p| p.theta1 <= theta1);
                if i == 0 {
                    return Some(points[0].theta2);
                }
                if i == points.len() {
                    return Some(points[i - 1].theta2);
                }
                let (a, b) = (points[i - 1], points[i]);
                let s = (theta1 - a.theta1) / (b.theta1 - a.theta1);
                Some(a.theta2 + s * (b.theta2 - a.theta2))
            }
        }
    }

    /// `count` points evenly spaced in `θ1` over `[0, 1]`, with `None` where
    /// the frontier is undefined.
    pub fn grid(&self, count: usize) -> Vec<(f64, Option<f64>)> {
        let last = count.saturating_sub(1).max(1) as f64;
        (0..count)
            .map(|i| {
                let t = i as f64 / last;
                (t, self.theta2_at(t))
            })
            .collect()
    }
}
