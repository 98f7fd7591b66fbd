//! Mutual fund coalition between investors and a fund manager.

use crate::coalition::{CharacteristicFunction, Coalition, MAX_EXHAUSTIVE_AGENTS};
use crate::error::{Error, Result};

/// Game over `n_investors` investors (agents `0..n`) and the manager
/// (agent `n`).
///
/// Investors bring the investor utility in equal shares whether or not the
/// manager joins; the manager's utility only materializes when everyone
/// stays, and a manager left alone has nothing. Values are additive plus a
/// unanimity bonus, so the game is convex.
pub fn build_fund_game(
    n_investors: usize,
    investor_utility: f64,
    manager_utility: f64,
) -> Result<CharacteristicFunction> {
    if n_investors == 0 {
        return Err(Error::Parameter("the fund needs at least one investor".into()));
    }
    for (name, u) in [("investor", investor_utility), ("manager", manager_utility)] {
        if !(u.is_finite() && u >= 0.0) {
            return Err(Error::Parameter(format!(
                "{name} utility must be finite and non-negative, got {u}"
            )));
        }
    }
    let n = n_investors + 1;
    if n > MAX_EXHAUSTIVE_AGENTS {
        return Err(Error::Capacity {
            what: "fund agent count",
            got: n,
            max: MAX_EXHAUSTIVE_AGENTS,
        });
    }
    let grand = Coalition::grand(n);
    let share = investor_utility / n_investors as f64;
    CharacteristicFunction::from_fn(n, true, |c| {
        let investors = c.len() - usize::from(c.contains(n_investors));
        let bonus = if c == grand { manager_utility } else { 0.0 };
        share * investors as f64 + bonus
    })
}
