//! Carpooling marketplace with a toll-setting regulator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coalition::{CharacteristicFunction, Coalition};
use crate::error::{Error, Result};

/// Largest rider count for exhaustive assignment search.
pub const MAX_RIDERS: usize = 10;
const IDENTITY_TOL: f64 = 1e-9;
const BUDGET_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripSpec {
    pub riders: Vec<String>,
    #[serde(default)]
    pub segments: Vec<String>,
    pub cost: f64,
}

/// File form of a carpool model; riders are referenced by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarpoolSpec {
    pub riders: Vec<String>,
    pub trips: Vec<TripSpec>,
    /// One row per rider, one column per trip.
    pub valuations: Vec<Vec<f64>>,
    #[serde(default)]
    pub tolls: BTreeMap<String, f64>,
    pub prices: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trip {
    pub riders: Vec<usize>,
    pub segments: Vec<String>,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CarpoolModel {
    riders: Vec<String>,
    trips: Vec<Trip>,
    valuations: Vec<Vec<f64>>,
    tolls: BTreeMap<String, f64>,
    prices: Vec<f64>,
}

fn finite_non_negative(x: f64, what: &str) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} must be finite and non-negative, got {x}")))
    }
}

impl CarpoolModel {
    pub fn new(
        riders: Vec<String>,
        trips: Vec<Trip>,
        valuations: Vec<Vec<f64>>,
        tolls: BTreeMap<String, f64>,
        prices: Vec<f64>,
    ) -> Result<Self> {
        let m = riders.len();
        if m == 0 {
            return Err(Error::InvalidInput("no riders".into()));
        }
        for (i, name) in riders.iter().enumerate() {
            if riders[..i].contains(name) {
                return Err(Error::InvalidInput(format!("duplicate rider '{name}'")));
            }
        }
        for (t, trip) in trips.iter().enumerate() {
            if trip.riders.is_empty() {
                return Err(Error::InvalidInput(format!("trip {t} has no riders")));
            }
            for (i, &r) in trip.riders.iter().enumerate() {
                if r >= m {
                    return Err(Error::Index { index: r, n: m });
                }
                if trip.riders[..i].contains(&r) {
                    return Err(Error::InvalidInput(format!("trip {t} lists rider {r} twice")));
                }
            }
            finite_non_negative(trip.cost, "trip cost")?;
        }
        if valuations.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: valuations.len(),
                context: "valuation rows (one per rider)",
            });
        }
        for row in &valuations {
            if row.len() != trips.len() {
                return Err(Error::DimensionMismatch {
                    expected: trips.len(),
                    got: row.len(),
                    context: "valuation columns (one per trip)",
                });
            }
            for &v in row {
                finite_non_negative(v, "valuation")?;
            }
        }
        for &fee in tolls.values() {
            finite_non_negative(fee, "toll")?;
        }
        if prices.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: prices.len(),
                context: "prices (one per rider)",
            });
        }
        for &p in &prices {
            if !p.is_finite() {
                return Err(Error::InvalidInput("prices must be finite".into()));
            }
        }
        Ok(CarpoolModel {
            riders,
            trips,
            valuations,
            tolls,
            prices,
        })
    }

    pub fn from_spec(spec: &CarpoolSpec) -> Result<Self> {
        let index = |name: &str| {
            spec.riders
                .iter()
                .position(|r| r == name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown rider '{name}'")))
        };
        let trips = spec
            .trips
            .iter()
            .map(|t| {
                Ok(Trip {
                    riders: t.riders.iter().map(|r| index(r)).collect::<Result<_>>()?,
                    segments: t.segments.clone(),
                    cost: t.cost,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for name in spec.prices.keys() {
            index(name)?;
        }
        let prices = spec
            .riders
            .iter()
            .map(|r| {
                spec.prices
                    .get(r)
                    .copied()
                    .ok_or_else(|| Error::InvalidInput(format!("no price for rider '{r}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            spec.riders.clone(),
            trips,
            spec.valuations.clone(),
            spec.tolls.clone(),
            prices,
        )
    }

    pub fn riders(&self) -> &[String] {
        &self.riders
    }

    pub fn trips(&self) -> &[Trip] {
        &self.trips
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn tolls(&self) -> &BTreeMap<String, f64> {
        &self.tolls
    }

    pub fn valuation(&self, rider: usize, trip: usize) -> f64 {
        self.valuations[rider][trip]
    }

    // Trip index of each rider under `a`.
    fn trip_of_each_rider(&self, a: &Assignment) -> Result<Vec<usize>> {
        let mut trip_of = vec![None; self.riders.len()];
        for &t in &a.trips {
            let trip = self
                .trips
                .get(t)
                .ok_or_else(|| Error::Partition(format!("trip {t} is not a candidate trip")))?;
            for &r in &trip.riders {
                if trip_of[r].replace(t).is_some() {
                    return Err(Error::Partition(format!(
                        "rider '{}' is in more than one chosen trip",
                        self.riders[r]
                    )));
                }
            }
        }
        trip_of
            .into_iter()
            .enumerate()
            .map(|(r, t)| {
                t.ok_or_else(|| {
                    Error::Partition(format!("rider '{}' is not assigned a trip", self.riders[r]))
                })
            })
            .collect()
    }

    fn total_valuation(&self, a: &Assignment) -> Result<f64> {
        let trip_of = self.trip_of_each_rider(a)?;
        Ok(trip_of
            .iter()
            .enumerate()
            .map(|(r, &t)| self.valuations[r][t])
            .sum())
    }
}

/// A set of chosen trips covering every rider exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment {
    trips: Vec<usize>,
}

impl Assignment {
    pub fn new(model: &CarpoolModel, mut trips: Vec<usize>) -> Result<Self> {
        trips.sort_unstable();
        let a = Assignment { trips };
        model.trip_of_each_rider(&a)?;
        Ok(a)
    }

    pub fn trips(&self) -> &[usize] {
        &self.trips
    }
}

/// Riders' total utility `U = Σ (v_m(t_m) − p_m)`.
pub fn carpool_utility(model: &CarpoolModel, a: &Assignment) -> Result<f64> {
    Ok(model.total_valuation(a)? - model.prices.iter().sum::<f64>())
}

/// Social surplus `P = Σ v_m(t_m) − Σ c(t)`.
pub fn carpool_surplus(model: &CarpoolModel, a: &Assignment) -> Result<f64> {
    let costs: f64 = a.trips.iter().map(|&t| model.trips[t].cost).sum();
    Ok(model.total_valuation(a)? - costs)
}

/// Licensee revenues `R = Σ p_m`, which also equal `Σ v_m(t_m) − U`.
pub fn carpool_revenues(model: &CarpoolModel, a: &Assignment) -> Result<f64> {
    let revenues: f64 = model.prices.iter().sum();
    let identity = model.total_valuation(a)? - carpool_utility(model, a)?;
    debug_assert!(
        (revenues - identity).abs() <= IDENTITY_TOL * revenues.abs().max(1.0),
        "revenue identity broken: {revenues} vs {identity}"
    );
    Ok(revenues)
}

/// Whether payments cover the physical costs of the chosen trips plus the
/// tolls of every segment each chosen trip uses.
pub fn budget_balanced(model: &CarpoolModel, a: &Assignment) -> Result<bool> {
    model.trip_of_each_rider(a)?;
    let mut due = 0.0;
    for &t in &a.trips {
        let trip = &model.trips[t];
        due += trip.cost;
        for segment in &trip.segments {
            due += model
                .tolls
                .get(segment)
                .ok_or_else(|| Error::MissingToll(segment.clone()))?;
        }
    }
    let paid: f64 = model.prices.iter().sum();
    Ok(paid >= due - BUDGET_TOL)
}

/// Assignment maximizing social surplus, by exhaustive search. Ties keep
/// the first assignment found with trips taken in index order.
pub fn surplus_optimal_assignment(model: &CarpoolModel) -> Result<Assignment> {
    let m = model.riders.len();
    if m > MAX_RIDERS {
        return Err(Error::Capacity {
            what: "rider count",
            got: m,
            max: MAX_RIDERS,
        });
    }
    let trip_masks: Vec<u32> = model
        .trips
        .iter()
        .map(|t| t.riders.iter().fold(0u32, |acc, &r| acc | 1 << r))
        .collect();
    let trip_surplus: Vec<f64> = model
        .trips
        .iter()
        .enumerate()
        .map(|(i, t)| t.riders.iter().map(|&r| model.valuations[r][i]).sum::<f64>() - t.cost)
        .collect();

    struct Search<'a> {
        masks: &'a [u32],
        surplus: &'a [f64],
        full: u32,
        chosen: Vec<usize>,
        best: Option<(f64, Vec<usize>)>,
    }

    impl Search<'_> {
        fn run(&mut self, covered: u32, value: f64) {
            if covered == self.full {
                if self.best.as_ref().is_none_or(|(b, _)| value > b + 1e-12) {
                    self.best = Some((value, self.chosen.clone()));
                }
                return;
            }
            let next = (!covered).trailing_zeros();
            for t in 0..self.masks.len() {
                let mask = self.masks[t];
                if mask & (1 << next) != 0 && mask & covered == 0 {
                    self.chosen.push(t);
                    self.run(covered | mask, value + self.surplus[t]);
                    self.chosen.pop();
                }
            }
        }
    }

    let mut search = Search {
        masks: &trip_masks,
        surplus: &trip_surplus,
        full: Coalition::grand(m).mask(),
        chosen: Vec::new(),
        best: None,
    };
    search.run(0, 0.0);
    let (_, trips) = search
        .best
        .ok_or_else(|| Error::Partition("no set of candidate trips covers every rider".into()))?;
    Assignment::new(model, trips)
}

/// Two-player game between the riders (agent 0) and the regulator
/// (agent 1).
///
/// Together they realize `U + P` at the surplus-optimal assignment. Riders
/// alone only have their solo trips, valued `Σ (v_m(solo) − p_m)` over
/// riders with a solo candidate and capped at `U`. The regulator alone has
/// no surplus to plan.
pub fn build_carpool_game(model: &CarpoolModel) -> Result<CharacteristicFunction> {
    let a = surplus_optimal_assignment(model)?;
    let utility = carpool_utility(model, &a)?;
    let surplus = carpool_surplus(model, &a)?;
    let solo: f64 = (0..model.riders.len())
        .filter_map(|r| {
            model
                .trips
                .iter()
                .position(|t| t.riders == [r])
                .map(|t| model.valuations[r][t] - model.prices[r])
        })
        .sum();
    let riders_alone = solo.min(utility);
    CharacteristicFunction::new(
        2,
        [
            (Coalition::singleton(0), riders_alone),
            (Coalition::singleton(1), 0.0),
            (Coalition::grand(2), utility + surplus),
        ],
        true,
    )
}
