use crate::error::{Error, Result};

/// Inputs consumed (non-positive entries) followed by one output
/// (non-negative last entry).
#[derive(Clone, Debug, PartialEq)]
pub struct ResourceAllocation(Vec<f64>);

impl ResourceAllocation {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let Some((&output, inputs)) = entries.split_last() else {
            return Err(Error::InvalidInput("empty resource allocation".into()));
        };
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite allocation entry".into()));
        }
        if inputs.iter().any(|&x| x > 0.0) {
            return Err(Error::InvalidInput(
                "consumed resources must be entered as non-positive quantities".into(),
            ));
        }
        if output < 0.0 {
            return Err(Error::InvalidInput("output quantity must be non-negative".into()));
        }
        Ok(ResourceAllocation(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PriceVector(Vec<f64>);

impl PriceVector {
    pub fn new(prices: Vec<f64>) -> Result<Self> {
        if prices.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidInput("prices must be finite and non-negative".into()));
        }
        Ok(PriceVector(prices))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Value of an allocation at the agent's prices, `pᵀ·y`.
pub fn allocation_value(p: &PriceVector, y: &ResourceAllocation) -> Result<f64> {
    if p.0.len() != y.0.len() {
        return Err(Error::DimensionMismatch {
            expected: y.0.len(),
            got: p.0.len(),
            context: "price vector",
        });
    }
    Ok(p.0.iter().zip(&y.0).map(|(a, b)| a * b).sum())
}

/// Coalition value as the sum of member allocation values. A coalition
/// needs at least two agents.
pub fn coalition_value_from_allocations(pairs: &[(PriceVector, ResourceAllocation)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::SingletonCoalition(pairs.len()));
    }
    pairs.iter().map(|(p, y)| allocation_value(p, y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(v: &[f64]) -> ResourceAllocation {
        ResourceAllocation::new(v.to_vec()).unwrap()
    }

    fn p(v: &[f64]) -> PriceVector {
        PriceVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn industrial_and_employee_allocations() {
        let company = y(&[-7.0, -12.0, -6.0, 10.0]);
        assert_eq!(allocation_value(&p(&[1.0, 2.0, 3.0, 6.0]), &company).unwrap(), 11.0);
        let employee = y(&[0.0, 0.0, -1.0, 1.0]);
        for wage in [0.0, 12.5, 40.0] {
            assert_eq!(allocation_value(&p(&[1.0, 1.0, wage, wage]), &employee).unwrap(), 0.0);
        }
        assert_eq!(allocation_value(&p(&[3.0, 4.0]), &y(&[0.0, 0.0])).unwrap(), 0.0);
    }

    #[test]
    fn sign_pattern_and_dimensions() {
        assert!(ResourceAllocation::new(vec![1.0, 2.0]).is_err());
        assert!(ResourceAllocation::new(vec![-1.0, -2.0]).is_err());
        assert!(ResourceAllocation::new(vec![]).is_err());
        assert!(PriceVector::new(vec![-1.0]).is_err());
        assert!(matches!(
            allocation_value(&p(&[1.0]), &y(&[-1.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coalition_values() {
        // Single-entry allocations with price 1 carry exactly their value.
        let agent = |v: f64| (p(&[1.0]), y(&[v]));
        assert_eq!(coalition_value_from_allocations(&[agent(4.0), agent(3.0)]).unwrap(), 7.0);
        assert_eq!(coalition_value_from_allocations(&[agent(0.0), agent(0.0)]).unwrap(), 0.0);
        assert_eq!(
            coalition_value_from_allocations(&[agent(1.0), agent(2.0), agent(3.0)]).unwrap(),
            6.0
        );
        assert_eq!(
            coalition_value_from_allocations(&[agent(1.0)]),
            Err(Error::SingletonCoalition(1))
        );
    }
}
