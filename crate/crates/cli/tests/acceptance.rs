//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any
//! failure.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sve_core::coalition::{
    enumerate_feasible_coalitions, is_feasible, AgentGraph, AgentSet, CharacteristicFunction,
    Coalition,
};
use sve_core::economy::{
    budget_balanced, carpool_revenues, carpool_utility, equality_frontier, equality_paradox_check,
    surplus_optimal_assignment, CarpoolModel, EqualityBenefitModel, Trip,
};
use sve_core::frontier::Frontier;
use sve_core::lp::{Constraint, Relation};
use sve_core::mcdm::{balanced_solution, gp_solve, GoalSpec};
use sve_core::solution::{classify, core_nonempty, is_convex, is_in_core, PayoffVector};
use sve_core::svc::svc_without_targets;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

struct Run {
    stdout: Vec<u8>,
    code: i32,
    files: BTreeMap<String, Vec<u8>>,
}

fn sve(args: &[&str], out_dir: Option<&Path>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sve"));
    cmd.args(args);
    if let Some(dir) = out_dir {
        cmd.arg("--out-dir").arg(dir);
    }
    let out = cmd.output().expect("sve runs");
    let mut files = BTreeMap::new();
    if let Some(dir) = out_dir {
        if let Ok(entries) = std::fs::read_dir(dir) {
            for e in entries.flatten() {
                files.insert(
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                );
            }
        }
    }
    Run {
        stdout: out.stdout,
        code: out.status.code().unwrap_or(-1),
        files,
    }
}

fn json_of(run: &Run) -> Value {
    serde_json::from_slice(&run.stdout).expect("stdout is JSON")
}

fn trapezoid(f: &Frontier, points: usize) -> f64 {
    let g = f.grid(points);
    g.windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1.unwrap() + w[1].1.unwrap()))
        .sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for k in [1.0, 2.0] {
        let model = EqualityBenefitModel::new(100.0, 30.0, k).unwrap();
        let f = equality_frontier(&model).unwrap();
        check!(f == Frontier::Power { k }, "k={k} frontier is {f:?}");
        for i in 0..=100 {
            let e = i as f64 / 100.0;
            let z = model.normalized(e).unwrap().theta2;
            check!((z - (1.0 - e.powf(k))).abs() < 1e-12, "k={k}, E={e}: theta2 {z}");
        }
    }
    let line = Frontier::power(1.0).unwrap();
    let square = Frontier::power(2.0).unwrap();
    let svc = svc_without_targets(&line, &square).unwrap().svc;
    check!((svc - 1.0 / 6.0).abs() < 1e-9, "closed-form svc {svc}");
    let numeric = trapezoid(&square, 10_001) - trapezoid(&line, 10_001);
    check!((numeric - 1.0 / 6.0).abs() < 1e-6, "trapezoid svc {numeric}");
    let elapsed = start.elapsed().as_secs_f64();
    check!(elapsed < 1.0, "took {elapsed} s");
    Ok(())
}

fn criterion_2() -> Outcome {
    let r = svc_without_targets(&Frontier::power(1.0).unwrap(), &Frontier::power(3.0).unwrap())
        .unwrap();
    check!((r.svc - 0.25).abs() < 1e-9, "svc {}", r.svc);

    let dir = tempfile::tempdir().unwrap();
    let run = sve(&["svc", "--input", fixture("svc_carpool.json").to_str().unwrap()], Some(dir.path()));
    check!(run.code == 0, "exit code {}", run.code);
    let reported = json_of(&run)["svc"].as_f64().unwrap();
    check!((reported - 0.25).abs() < 1e-9, "CLI svc {reported}");
    let csv = String::from_utf8(run.files["svc_curves.csv"].clone()).unwrap();
    let mut lines = csv.lines();
    check!(lines.next() == Some("theta1,before,after"), "bad CSV header");
    let rows: Vec<[f64; 3]> = lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    check!(rows.len() == 1001, "{} CSV rows", rows.len());
    for (i, pair) in rows.windows(2).enumerate() {
        check!((pair[1][0] - pair[0][0] - 1e-3).abs() < 1e-9, "uneven grid at row {i}");
        check!(pair[1][1] <= pair[0][1] && pair[1][2] <= pair[0][2], "not monotone at row {i}");
    }
    for row in &rows {
        check!(row[2] >= row[1], "after below before at theta1={}", row[0]);
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let p = balanced_solution(&Frontier::power(1.0).unwrap(), 0.8, 0.2).unwrap();
    let residual = (p.theta2 - (4.0 * p.theta1 - 3.0)).abs();
    check!(residual < 1e-8, "residual {residual}");
    check!((p.theta1 - 0.8).abs() < 1e-8 && (p.theta2 - 0.2).abs() < 1e-8, "point {p:?}");
    Ok(())
}

fn criterion_4() -> Outcome {
    let v = CharacteristicFunction::new(2, [(Coalition::grand(2), 7.0)], true).unwrap();
    check!(is_convex(&v).unwrap(), "not convex");
    check!(core_nonempty(&v).unwrap().is_some(), "empty core");
    let u = PayoffVector::new(vec![4.0, 3.0]).unwrap();
    check!(is_in_core(&u, &v).unwrap(), "(4, 3) not in core");
    check!(classify(&v).unwrap().shared_value, "not a shared value game");
    let run = sve(&["classify", "--input", fixture("law_firm.json").to_str().unwrap()], None);
    check!(json_of(&run)["shared_value"] == Value::Bool(true), "CLI classify disagrees");
    Ok(())
}

fn criterion_5() -> Outcome {
    for n in 2..=12usize {
        let count = enumerate_feasible_coalitions(&AgentGraph::complete(n).unwrap(), 2).len();
        let expected = (1usize << n) - n - 1;
        check!(count == expected, "n={n}: {count} vs {expected}");
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let agents =
        AgentSet::with_labels(["Co", "S1", "S2", "S3", "S4", "S5", "Env", "Emp", "Cus"]).unwrap();
    let named = [
        ("Co", "S1"),
        ("Co", "Env"),
        ("Co", "Emp"),
        ("Co", "Cus"),
        ("S1", "S2"),
        ("S1", "S3"),
        ("S3", "S4"),
        ("S3", "S5"),
        ("S4", "S5"),
    ];
    let edges: Vec<(usize, usize)> = named
        .iter()
        .map(|(a, b)| (agents.index_of(a).unwrap(), agents.index_of(b).unwrap()))
        .collect();
    let g = AgentGraph::new(9, &edges).unwrap();
    let yes = agents.coalition_of(&["Co", "S1", "S3", "S4", "S5"]).unwrap();
    let no = agents.coalition_of(&["S2", "S5"]).unwrap();
    check!(is_feasible(yes, &g).unwrap(), "{{Co,S1,S3,S4,S5}} infeasible");
    check!(!is_feasible(no, &g).unwrap(), "{{S2,S5}} feasible");
    Ok(())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut convex = 0;
    for trial in 0..100 {
        let n = 2 + trial % 4;
        let size = 1usize << n;
        let values: Vec<f64> = if trial % 2 == 0 {
            (0..size)
                .map(|m| if m == 0 { 0.0 } else { rng.random_range(-2.0..8.0) })
                .collect()
        } else {
            let dividends: Vec<f64> = (0..size).map(|_| rng.random_range(0.0..3.0)).collect();
            (0..size)
                .map(|m| (1..size).filter(|&t| t & m == t).map(|t| dividends[t]).sum())
                .collect()
        };
        let v = CharacteristicFunction::from_fn(n, true, |c| values[c.mask() as usize]).unwrap();
        let c = classify(&v).map_err(|e| e.to_string())?;
        if c.convex {
            convex += 1;
            check!(c.core_nonempty, "convex game with empty core: {values:?}");
        }
    }
    check!(convex > 0, "no convex games generated");
    let majority =
        CharacteristicFunction::from_fn(3, true, |s| if s.len() >= 2 { 1.0 } else { 0.0 }).unwrap();
    let c = classify(&majority).unwrap();
    check!(!c.convex && !c.core_nonempty, "majority game: {c:?}");
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for instance in 0..25 {
        let targets = [rng.random_range(0.3..2.0), rng.random_range(0.3..2.0)];
        let weights = [rng.random_range(0.1..1.0), rng.random_range(0.1..1.0)];
        let upper = [rng.random_range(0.2..1.5), rng.random_range(0.2..1.5)];
        let goals = [
            GoalSpec::new("g1", targets[0], weights[0]),
            GoalSpec::new("g2", targets[1], weights[1]),
        ];
        let row = |a: f64, b: f64, relation, rhs| Constraint {
            coefficients: vec![a, b],
            relation,
            rhs,
        };
        let region = [
            row(1.0, 0.0, Relation::GreaterEq, 0.0),
            row(0.0, 1.0, Relation::GreaterEq, 0.0),
            row(1.0, 0.0, Relation::LessEq, upper[0]),
            row(0.0, 1.0, Relation::LessEq, upper[1]),
        ];
        let sol = gp_solve(&goals, &region).map_err(|e| e.to_string())?;
        let term = |j: usize, u: f64| weights[j] * (u - targets[j]).abs() / targets[j];
        let steps = |hi: f64| (0..=(hi / 1e-3).floor() as usize).map(|i| i as f64 * 1e-3);
        let mut brute = f64::INFINITY;
        for a in steps(upper[0]) {
            let ta = term(0, a);
            for b in steps(upper[1]) {
                brute = brute.min(ta + term(1, b));
            }
        }
        check!(
            (sol.objective - brute).abs() <= 2e-3,
            "instance {instance}: {} vs grid {brute}",
            sol.objective
        );
        for j in 0..2 {
            check!(sol.over[j] * sol.under[j] < 1e-9, "instance {instance}: slackness on goal {j}");
        }
    }
    Ok(())
}

fn random_carpool(rng: &mut ChaCha8Rng) -> CarpoolModel {
    let m = rng.random_range(1..=6);
    let segments = ["s1", "s2", "s3"];
    let mut trips: Vec<Trip> = (0..m)
        .map(|r| Trip {
            riders: vec![r],
            segments: vec![segments[r % 3].into()],
            cost: rng.random_range(1.0..5.0),
        })
        .collect();
    for _ in 0..rng.random_range(0..4) {
        let riders: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
        if riders.len() >= 2 {
            trips.push(Trip {
                riders,
                segments: segments[..rng.random_range(1..=3)].iter().map(|s| s.to_string()).collect(),
                cost: rng.random_range(1.0..8.0),
            });
        }
    }
    let valuations = (0..m)
        .map(|r| {
            trips
                .iter()
                .map(|t| if t.riders.contains(&r) { rng.random_range(0.0..10.0) } else { 0.0 })
                .collect()
        })
        .collect();
    let tolls = segments.iter().map(|s| (s.to_string(), rng.random_range(0.0..2.0))).collect();
    let prices = (0..m).map(|_| rng.random_range(0.0..10.0)).collect();
    CarpoolModel::new((0..m).map(|r| format!("r{r}")).collect(), trips, valuations, tolls, prices)
        .unwrap()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..50 {
        let model = random_carpool(&mut rng);
        let a = surplus_optimal_assignment(&model).map_err(|e| e.to_string())?;
        let mut valuation = 0.0;
        let mut due = 0.0;
        for &t in a.trips() {
            let trip = &model.trips()[t];
            valuation += trip.riders.iter().map(|&r| model.valuation(r, t)).sum::<f64>();
            due += trip.cost + trip.segments.iter().map(|s| model.tolls()[s]).sum::<f64>();
        }
        let r = carpool_revenues(&model, &a).unwrap();
        let u = carpool_utility(&model, &a).unwrap();
        let residual = (r - (valuation - u)).abs();
        check!(residual < 1e-9, "model {i}: residual {residual}");
        let paid: f64 = model.prices().iter().sum();
        check!(
            budget_balanced(&model, &a).unwrap() == (paid >= due - 1e-9),
            "model {i}: budget balance disagrees"
        );
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    for k in [1.0, 2.0, 3.0] {
        let model = EqualityBenefitModel::new(100.0, 30.0, k).unwrap();
        for w1 in [0.5, 0.8, 0.99] {
            let check = equality_paradox_check(&model, w1, 1.0 - w1).map_err(|e| e.to_string())?;
            check!(check.point.theta1 < 1.0, "k={k}, w1={w1}: theta1 = {}", check.point.theta1);
            check!(!check.attains_max_equality, "k={k}, w1={w1}: reaches full equality");
        }
    }
    Ok(())
}

fn criterion_11() -> Outcome {
    let f = |name: &str| fixture(name).to_str().unwrap().to_owned();
    let cases: Vec<Vec<String>> = vec![
        vec!["classify".into(), "--input".into(), f("stakeholders.json")],
        vec!["core-check".into(), "--input".into(), f("majority.json")],
        vec!["convexity".into(), "--input".into(), f("majority.json")],
        vec!["coalitions".into(), "--input".into(), f("stakeholders.json")],
        vec!["cp".into(), "--input".into(), f("cp_criteria.json")],
        vec!["gp".into(), "--input".into(), f("gp.json")],
        vec!["svc".into(), "--input".into(), f("svc_equality.json")],
        vec!["svc".into(), "--input".into(), f("svc_points.json"), "--seed".into(), "7".into()],
        vec!["carpool".into(), "--input".into(), f("carpool.json")],
        vec!["equality".into(), "--input".into(), f("equality.json"), "--weights".into(), "0.8,0.2".into()],
    ];
    for args in &cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let first = sve(&args, Some(d1.path()));
        let second = sve(&args, Some(d2.path()));
        check!(!first.stdout.is_empty(), "{} printed nothing", args[0]);
        check!(first.code == second.code, "{}: exit codes differ", args[0]);
        check!(first.stdout == second.stdout, "{}: stdout differs", args[0]);
        check!(first.files == second.files, "{}: output files differ", args[0]);
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("equality frontiers and svc = 1/6", criterion_1),
        ("carpool frontier shift svc = 1/4 and CSV curves", criterion_2),
        ("balanced bargaining point (0.8, 0.2)", criterion_3),
        ("law firm game is a shared value game", criterion_4),
        ("complete graph coalition counts", criterion_5),
        ("stakeholder graph feasibility", criterion_6),
        ("convex games have non-empty cores", criterion_7),
        ("goal programming matches grid search", criterion_8),
        ("revenue identity and budget balance", criterion_9),
        ("balanced solutions stop short of full equality", criterion_10),
        ("CLI output is deterministic", criterion_11),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(format!("panicked: {msg}"))
            });
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
