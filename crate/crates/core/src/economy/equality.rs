use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frontier::{Frontier, ThetaPoint};
use crate::mcdm::{balanced_solution, normalize};

/// Law firm trading gender pay equality `E ∈ [0, 1]` against benefits.
///
/// Women are paid `E · C_m` for the pay `C_m` men receive, so benefits are
/// `B = Q − C_m (1 + E^k)`: `k = 1` is the baseline, `k = 2` the coalition
/// whose productivity gains cut costs with the square of equality.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EqualityBenefitModel {
    #[serde(rename = "Q")]
    pub sales: f64,
    #[serde(rename = "C_m")]
    pub men_pay: f64,
    pub k: f64,
}

impl EqualityBenefitModel {
    pub fn new(sales: f64, men_pay: f64, k: f64) -> Result<Self> {
        let model = EqualityBenefitModel { sales, men_pay, k };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sales.is_finite() && self.sales >= 0.0) {
            return Err(Error::InvalidInput(format!("sales Q must be >= 0, got {}", self.sales)));
        }
        if self.men_pay == 0.0 {
            return Err(Error::DegenerateRange(self.sales));
        }
        if !(self.men_pay.is_finite() && self.men_pay > 0.0) {
            return Err(Error::InvalidInput(format!("C_m must be > 0, got {}", self.men_pay)));
        }
        if !(self.k.is_finite() && self.k >= 1.0) {
            return Err(Error::InvalidInput(format!("exponent k must be >= 1, got {}", self.k)));
        }
        Ok(())
    }

    /// True when the lowest benefit `Q − 2 C_m` is negative.
    pub fn loses_money_at_full_equality(&self) -> bool {
        self.min_benefit() < 0.0
    }

    /// Benefit at zero equality, `Q − C_m`.
    pub fn max_benefit(&self) -> f64 {
        self.sales - self.men_pay
    }

    /// Benefit at full equality, `Q − 2 C_m`.
    pub fn min_benefit(&self) -> f64 {
        self.sales - 2.0 * self.men_pay
    }

    pub fn benefit(&self, equality: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&equality) {
            return Err(Error::Range {
                value: equality,
                low: 0.0,
                high: 1.0,
            });
        }
        Ok(self.sales - self.men_pay * (1.0 + equality.powf(self.k)))
    }

    /// `(θ1, θ2)` with `θ1 = E` and `θ2` the benefit normalized between its
    /// extremes.
    pub fn normalized(&self, equality: f64) -> Result<ThetaPoint> {
        let b = self.benefit(equality)?;
        Ok(ThetaPoint::new(
            equality,
            normalize(b, self.min_benefit(), self.max_benefit())?,
        ))
    }
}

/// Normalized frontier `θ2 = 1 − θ1^k` of the model.
pub fn equality_frontier(model: &EqualityBenefitModel) -> Result<Frontier> {
    model.validate()?;
    Frontier::power(model.k)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParadoxCheck {
    pub point: ThetaPoint,
    pub attains_max_equality: bool,
}

/// Balanced solution under bargaining weights, and whether it reaches full
/// equality (it does not for any finite weights on these frontiers).
pub fn equality_paradox_check(model: &EqualityBenefitModel, w1: f64, w2: f64) -> Result<ParadoxCheck> {
    let point = balanced_solution(&equality_frontier(model)?, w1, w2)?;
    Ok(ParadoxCheck {
        point,
        attains_max_equality: point.theta1 > 1.0 - 1e-9,
    })
}
