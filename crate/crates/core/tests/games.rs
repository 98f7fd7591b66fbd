use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sve_core::coalition::{CharacteristicFunction, Coalition};
use sve_core::lp::{solve_lp, LpOutcome};
use sve_core::solution::{
    classify, core_lp, core_nonempty, is_convex, is_in_core, PayoffVector, DEFAULT_TOL,
};

fn table_game(n: usize, values: &[f64], sustainable: bool) -> CharacteristicFunction {
    CharacteristicFunction::from_fn(n, sustainable, |c| values[c.mask() as usize]).unwrap()
}

// Direct loop over every coalition.
fn in_core_oracle(u: &[f64], values: &[f64], n: usize, tol: f64) -> bool {
    let full = (1usize << n) - 1;
    let sum = |mask: usize| -> f64 { (0..n).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).sum() };
    if (sum(full) - values[full]).abs() > tol * values[full].abs().max(1.0) {
        return false;
    }
    (1..full).all(|m| sum(m) >= values[m] - tol)
}

// Three-player core is non-empty exactly when v(N) covers every minimal
// balanced collection.
fn three_player_core_oracle(v: &[f64]) -> bool {
    let grand = v[7];
    let tol = 1e-9;
    grand + tol >= v[1] + v[2] + v[4]
        && grand + tol >= v[3] + v[4]
        && grand + tol >= v[5] + v[2]
        && grand + tol >= v[6] + v[1]
        && grand + tol >= 0.5 * (v[3] + v[5] + v[6])
}

// Increasing marginal contributions along nested coalitions.
fn convex_oracle(v: &[f64], n: usize) -> bool {
    let size = 1usize << n;
    for s in 0..size {
        for t in 0..size {
            if s & t != s {
                continue;
            }
            for i in 0..n {
                let bit = 1 << i;
                if t & bit != 0 {
                    continue;
                }
                if v[s | bit] - v[s] > v[t | bit] - v[t] + 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

fn values_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3i32..12, 1 << n).prop_map(|mut raw| {
        raw[0] = 0;
        raw.into_iter().map(f64::from).collect()
    })
}

// Marginal contribution vector along the identity ordering.
fn marginal_vector(v: &[f64], n: usize) -> Vec<f64> {
    let mut prefix = 0usize;
    (0..n)
        .map(|i| {
            let next = prefix | 1 << i;
            let x = v[next] - v[prefix];
            prefix = next;
            x
        })
        .collect()
}

#[test]
fn majority_game_is_not_convex_and_has_empty_core() {
    let v = CharacteristicFunction::from_fn(3, true, |s| if s.len() >= 2 { 1.0 } else { 0.0 })
        .unwrap();
    let c = classify(&v).unwrap();
    assert!(!c.convex && !c.core_nonempty && !c.shared_value);
    assert!(!is_convex(&v).unwrap());
}

#[test]
fn law_firm_game() {
    let v = CharacteristicFunction::new(2, [(Coalition::grand(2), 7.0)], true).unwrap();
    assert!(is_convex(&v).unwrap());
    assert!(core_nonempty(&v).unwrap().is_some());
    assert!(is_in_core(&PayoffVector::new(vec![4.0, 3.0]).unwrap(), &v).unwrap());
    assert!(classify(&v).unwrap().shared_value);
}

#[test]
fn seeded_random_convex_games_have_cores() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut convex_seen = 0;
    for trial in 0..100 {
        let n = 2 + trial % 4;
        // Mix of arbitrary tables and supermodular ones built from
        // non-negative unanimity dividends.
        let values: Vec<f64> = if trial % 2 == 0 {
            (0..1usize << n)
                .map(|m| if m == 0 { 0.0 } else { rng.random_range(-2.0..8.0) })
                .collect()
        } else {
            let dividends: Vec<f64> = (0..1usize << n).map(|_| rng.random_range(0.0..3.0)).collect();
            (0..1usize << n)
                .map(|m| (1..1usize << n).filter(|&t| t & m == t).map(|t| dividends[t]).sum())
                .collect()
        };
        let v = table_game(n, &values, true);
        let c = classify(&v).unwrap();
        assert_eq!(c.convex, convex_oracle(&values, n));
        if c.convex {
            convex_seen += 1;
            assert!(c.core_nonempty, "convex game without a core: {values:?}");
        }
    }
    assert!(convex_seen >= 50);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn witnesses_pass_the_core_oracle(n in 2usize..6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..1usize << n)
            .map(|m| if m == 0 { 0.0 } else { rng.random_range(-1.0..5.0) * (m.count_ones() as f64) })
            .collect();
        let v = table_game(n, &values, false);
        match core_nonempty(&v).unwrap() {
            Some(u) => {
                prop_assert!(in_core_oracle(u.as_slice(), &values, n, 1e-7));
                prop_assert!(is_in_core(&u, &v).unwrap());
            }
            None => {
                // The full program must agree that no point exists.
                prop_assert_eq!(solve_lp(&core_lp(&v).unwrap()).unwrap(), LpOutcome::Infeasible);
            }
        }
    }

    #[test]
    fn three_player_core_matches_balanced_collections(values in values_strategy(3)) {
        let v = table_game(3, &values, false);
        prop_assert_eq!(core_nonempty(&v).unwrap().is_some(), three_player_core_oracle(&values));
    }

    #[test]
    fn convexity_matches_marginal_oracle(n in 1usize..5, raw in proptest::collection::vec(-3i32..12, 16)) {
        let mut values: Vec<f64> = raw[..1 << n].iter().map(|&x| f64::from(x)).collect();
        values[0] = 0.0;
        let v = table_game(n, &values, false);
        prop_assert_eq!(is_convex(&v).unwrap(), convex_oracle(&values, n));
    }

    #[test]
    fn convex_games_contain_marginal_vectors(n in 2usize..6, dividends in proptest::collection::vec(0.0f64..4.0, 32)) {
        let values: Vec<f64> = (0..1usize << n)
            .map(|m| (1..1usize << n).filter(|&t| t & m == t).map(|t| dividends[t]).sum())
            .collect();
        let v = table_game(n, &values, true);
        let c = classify(&v).unwrap();
        prop_assert!(c.convex && c.core_nonempty && c.shared_value);
        let u = PayoffVector::new(marginal_vector(&values, n)).unwrap();
        prop_assert!(is_in_core(&u, &v).unwrap());
    }

    #[test]
    fn classification_is_scale_invariant(values in values_strategy(4), factor in 0.01f64..100.0) {
        let v = table_game(4, &values, true);
        let a = classify(&v).unwrap();
        let b = classify(&v.scaled(factor)).unwrap();
        prop_assert_eq!(a.convex, b.convex);
        prop_assert_eq!(a.core_nonempty, b.core_nonempty);
        prop_assert_eq!(a.shared_value, b.shared_value);
    }

    #[test]
    fn shared_value_needs_sustainability(values in values_strategy(3)) {
        let c = classify(&table_game(3, &values, false)).unwrap();
        prop_assert!(!c.shared_value);
        let c = classify(&table_game(3, &values, true)).unwrap();
        prop_assert_eq!(c.shared_value, c.core_nonempty);
    }

    #[test]
    fn core_membership_matches_loop(values in values_strategy(3), u in proptest::collection::vec(-2.0f64..10.0, 3), efficient in any::<bool>()) {
        let mut u = u;
        if efficient {
            u[2] = values[7] - u[0] - u[1];
        }
        let v = table_game(3, &values, false);
        let p = PayoffVector::new(u.clone()).unwrap();
        prop_assert_eq!(is_in_core(&p, &v).unwrap(), in_core_oracle(&u, &values, 3, DEFAULT_TOL));
    }
}
