//! One function per subcommand; each returns the JSON document to print.

use serde::Deserialize;
use serde_json::{json, Value};

use sve_core::coalition::{
    best_coalition_structure, enumerate_feasible_coalitions, is_feasible, AgentSet, Coalition,
    MAX_EXHAUSTIVE_AGENTS,
};
use sve_core::economy::{
    budget_balanced, build_carpool_game, carpool_revenues, carpool_surplus, carpool_utility,
    equality_frontier, equality_paradox_check, surplus_optimal_assignment, Assignment,
    CarpoolModel, CarpoolSpec, EqualityBenefitModel,
};
use sve_core::frontier::Frontier;
use sve_core::game_file::{GameSpec, LoadedGame};
use sve_core::lp::Constraint;
use sve_core::mcdm::{
    check_weight_sum, compromise_set, compromise_solution, gp_solve, CriterionSpec,
    DistanceOrder, GoalSpec,
};
use sve_core::solution::{classify_with_tol, convexity_violation, core_nonempty_with_tol, PayoffVector};
use sve_core::svc::{hypervolume, svc_with_targets, svc_without_targets, CREATION_TOL};

use crate::error::{CliError, CliResult};
use crate::io::{read_json, write_csv};
use crate::Common;

const CURVE_ROWS: usize = 1001;

pub struct Outcome {
    pub json: Value,
    pub warnings: Vec<String>,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(json: Value, warnings: Vec<String>) -> Self {
        Outcome {
            json,
            warnings,
            exit_code: 0,
        }
    }
}

fn load_game(common: &Common) -> CliResult<LoadedGame> {
    let spec: GameSpec = read_json(&common.input)?;
    Ok(spec.build()?)
}

fn labels(agents: &AgentSet, c: Coalition) -> Value {
    json!(agents.labels_of(c))
}

fn labelled_payoffs(agents: &AgentSet, u: &PayoffVector) -> Value {
    Value::Array(
        u.as_slice()
            .iter()
            .enumerate()
            .map(|(i, x)| json!({"agent": agents.label(i), "payoff": x}))
            .collect(),
    )
}

pub fn classify(common: &Common) -> CliResult<Outcome> {
    let game = load_game(common)?;
    let c = classify_with_tol(&game.function, common.tol)?;
    let grand_feasible = is_feasible(game.agents.grand(), &game.graph)?;
    let json = json!({
        "agents": game.agents.labels_of(game.agents.grand()),
        "convex": c.convex,
        "core_nonempty": c.core_nonempty,
        "sustainable": c.sustainable,
        "shared_value": c.shared_value,
        "core_witness": c.core_witness.as_ref().map(|u| labelled_payoffs(&game.agents, u)),
        "grand_coalition_feasible": grand_feasible,
    });
    let mut warnings = game.warnings;
    if !grand_feasible {
        warnings.push("the grand coalition is not connected in the agent graph".into());
    }
    Ok(Outcome::ok(json, warnings))
}

pub fn core_check(common: &Common) -> CliResult<Outcome> {
    let game = load_game(common)?;
    let witness = core_nonempty_with_tol(&game.function, common.tol)?;
    let json = json!({
        "core_nonempty": witness.is_some(),
        "core_witness": witness.as_ref().map(|u| labelled_payoffs(&game.agents, u)),
    });
    let mut outcome = Outcome::ok(json, game.warnings);
    if witness.is_none() {
        outcome.warnings.push("the core is empty; no witness exists".into());
        outcome.exit_code = 1;
    }
    Ok(outcome)
}

pub fn convexity(common: &Common) -> CliResult<Outcome> {
    let game = load_game(common)?;
    let violation = convexity_violation(&game.function, common.tol)?;
    let json = json!({
        "convex": violation.is_none(),
        "violation": violation.map(|(s, t)| json!({
            "S": labels(&game.agents, s),
            "T": labels(&game.agents, t),
        })),
    });
    Ok(Outcome::ok(json, game.warnings))
}

pub fn coalitions(common: &Common, min_size: usize) -> CliResult<Outcome> {
    let game = load_game(common)?;
    let found = enumerate_feasible_coalitions(&game.graph, min_size);
    let mut json = json!({
        "agents": game.agents.labels_of(game.agents.grand()),
        "min_size": min_size,
        "count": found.len(),
        "coalitions": found.iter().map(|&c| labels(&game.agents, c)).collect::<Vec<_>>(),
    });
    if game.agents.len() <= MAX_EXHAUSTIVE_AGENTS {
        let (cs, value) = best_coalition_structure(&game.function, &game.graph)?;
        json["best_structure"] = json!({
            "parts": cs.parts().iter().map(|&c| labels(&game.agents, c)).collect::<Vec<_>>(),
            "value": value,
        });
    }
    Ok(Outcome::ok(json, game.warnings))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CpInput {
    frontier: Frontier,
    #[serde(default)]
    weights: Option<[f64; 2]>,
    #[serde(default)]
    criteria: Option<Vec<CriterionSpec>>,
    #[serde(default)]
    h: Option<DistanceOrder>,
}

pub fn cp(common: &Common) -> CliResult<Outcome> {
    let input: CpInput = read_json(&common.input)?;
    let specs = match (&input.weights, &input.criteria) {
        (Some([w1, w2]), None) => vec![
            CriterionSpec::normalized("theta1", *w1)?,
            CriterionSpec::normalized("theta2", *w2)?,
        ],
        (None, Some(criteria)) => {
            for c in criteria {
                c.validate()?;
            }
            criteria.clone()
        }
        _ => {
            return Err(CliError::Input(
                "give exactly one of 'weights' or 'criteria'".into(),
            ))
        }
    };
    check_weight_sum(&specs)?;
    let h = input.h.unwrap_or(DistanceOrder::CHEBYSHEV);
    let solution = compromise_solution(&input.frontier, &specs, h)?;
    let set = compromise_set(&input.frontier, &specs)?;
    let mut json = json!({
        "h": h,
        "solution": solution,
        "compromise_set": set,
    });
    if input.criteria.is_some() {
        let theta = [solution.point.theta1, solution.point.theta2];
        json["raw_values"] = specs
            .iter()
            .zip(theta)
            .map(|(s, t)| json!({"name": s.name, "value": s.nadir + t * (s.anchor - s.nadir)}))
            .collect();
    }
    if let Some(dir) = &common.out_dir {
        let rows = input
            .frontier
            .grid(CURVE_ROWS)
            .into_iter()
            .filter(|(_, z)| z.is_some())
            .map(|(t, z)| vec![Some(t), z]);
        write_csv(dir, "frontier.csv", &["theta1", "theta2"], rows)?;
    }
    Ok(Outcome::ok(json, Vec::new()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GpInput {
    goals: Vec<GoalSpec>,
    #[serde(default)]
    constraints: Vec<Constraint>,
}

pub fn gp(common: &Common) -> CliResult<Outcome> {
    let input: GpInput = read_json(&common.input)?;
    let solution = gp_solve(&input.goals, &input.constraints)?;
    let goals: Vec<Value> = input
        .goals
        .iter()
        .enumerate()
        .map(|(j, g)| {
            json!({
                "name": g.name,
                "target": g.target,
                "achieved": solution.achieved[j],
                "over": solution.over[j],
                "under": solution.under[j],
            })
        })
        .collect();
    Ok(Outcome::ok(
        json!({"objective": solution.objective, "goals": goals}),
        Vec::new(),
    ))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SvcInput {
    #[serde(default)]
    before: Option<Frontier>,
    #[serde(default)]
    after: Option<Frontier>,
    #[serde(default)]
    g_before: Option<f64>,
    #[serde(default)]
    g_after: Option<f64>,
    #[serde(default)]
    before_points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    after_points: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    dim: Option<usize>,
}

pub fn svc(common: &Common) -> CliResult<Outcome> {
    let input: SvcInput = read_json(&common.input)?;
    let frontiers = (&input.before, &input.after);
    let targets = (input.g_before, input.g_after);
    let points = (&input.before_points, &input.after_points);
    let mode_count = [
        frontiers.0.is_some() || frontiers.1.is_some(),
        targets.0.is_some() || targets.1.is_some(),
        points.0.is_some() || points.1.is_some(),
    ]
    .iter()
    .filter(|&&m| m)
    .count();
    if mode_count != 1 {
        return Err(CliError::Input(
            "give exactly one pair: before/after, g_before/g_after or before_points/after_points"
                .into(),
        ));
    }
    match (frontiers, targets, points) {
        ((Some(before), Some(after)), _, _) => {
            let report = svc_without_targets(before, after)?;
            if let Some(dir) = &common.out_dir {
                let b = before.grid(CURVE_ROWS);
                let a = after.grid(CURVE_ROWS);
                let rows = b.into_iter().zip(a).map(|((t, zb), (_, za))| vec![Some(t), zb, za]);
                write_csv(dir, "svc_curves.csv", &["theta1", "before", "after"], rows)?;
            }
            Ok(Outcome::ok(
                json!({
                    "mode": "area",
                    "auc_before": report.auc_before,
                    "auc_after": report.auc_after,
                    "svc": report.svc,
                    "created": report.created,
                }),
                Vec::new(),
            ))
        }
        (_, (Some(g_before), Some(g_after)), _) => {
            let t = svc_with_targets(g_before, g_after);
            Ok(Outcome::ok(
                json!({
                    "mode": "targets",
                    "g_before": g_before,
                    "g_after": g_after,
                    "svc": t.svc,
                    "created": t.created,
                }),
                Vec::new(),
            ))
        }
        (_, _, (Some(before), Some(after))) => {
            let dim = input
                .dim
                .or_else(|| before.first().or(after.first()).map(Vec::len))
                .ok_or_else(|| CliError::Input("empty point sets need 'dim'".into()))?;
            let hv_before = hypervolume(before, dim, common.seed)?;
            let hv_after = hypervolume(after, dim, common.seed)?;
            let svc = hv_after.volume - hv_before.volume;
            Ok(Outcome::ok(
                json!({
                    "mode": "hypervolume",
                    "seed": common.seed,
                    "before": hv_before,
                    "after": hv_after,
                    "svc": svc,
                    "created": svc > CREATION_TOL,
                }),
                Vec::new(),
            ))
        }
        _ => Err(CliError::Input("both halves of the before/after pair are required".into())),
    }
}

pub fn carpool(common: &Common, assignment: Option<&[usize]>) -> CliResult<Outcome> {
    let spec: CarpoolSpec = read_json(&common.input)?;
    let model = CarpoolModel::from_spec(&spec)?;
    let optimal = surplus_optimal_assignment(&model)?;
    let (a, source) = match assignment {
        Some(trips) => (Assignment::new(&model, trips.to_vec())?, "given"),
        None => (optimal, "surplus_optimal"),
    };
    let game = build_carpool_game(&model)?;
    let c = classify_with_tol(&game, common.tol)?;
    let value = |c: Coalition| game.value(c).unwrap_or(0.0);
    let json = json!({
        "riders": model.riders(),
        "assignment": a.trips(),
        "assignment_source": source,
        "utility": carpool_utility(&model, &a)?,
        "surplus": carpool_surplus(&model, &a)?,
        "revenues": carpool_revenues(&model, &a)?,
        "budget_balanced": budget_balanced(&model, &a)?,
        "game": {
            "riders_alone": value(Coalition::singleton(0)),
            "regulator_alone": value(Coalition::singleton(1)),
            "grand": value(Coalition::grand(2)),
            "convex": c.convex,
            "core_nonempty": c.core_nonempty,
            "shared_value": c.shared_value,
            "core_witness": c.core_witness.map(|u| json!({
                "riders": u.as_slice()[0],
                "regulator": u.as_slice()[1],
            })),
        },
    });
    Ok(Outcome::ok(json, Vec::new()))
}

pub fn equality(common: &Common, weights: Option<&[f64]>) -> CliResult<Outcome> {
    let model: EqualityBenefitModel = read_json(&common.input)?;
    let frontier = equality_frontier(&model)?;
    let mut warnings = Vec::new();
    if model.loses_money_at_full_equality() {
        warnings.push(format!(
            "benefits turn negative at full equality (Q = {} < 2 C_m = {})",
            model.sales,
            2.0 * model.men_pay
        ));
    }
    let mut json = json!({
        "Q": model.sales,
        "C_m": model.men_pay,
        "k": model.k,
        "frontier": frontier,
        "max_benefit": model.max_benefit(),
        "min_benefit": model.min_benefit(),
    });
    if let Some(w) = weights {
        let [w1, w2] = w else {
            return Err(CliError::Input(format!(
                "--weights needs exactly two values, got {}",
                w.len()
            )));
        };
        let check = equality_paradox_check(&model, *w1, *w2)?;
        json["paradox"] = json!({
            "w1": w1,
            "w2": w2,
            "theta1": check.point.theta1,
            "theta2": check.point.theta2,
            "attains_max_equality": check.attains_max_equality,
        });
    }
    if let Some(dir) = &common.out_dir {
        let rows = (0..CURVE_ROWS)
            .map(|i| {
                let e = i as f64 / (CURVE_ROWS - 1) as f64;
                let p = model.normalized(e)?;
                Ok(vec![Some(e), Some(p.theta2), Some(model.benefit(e)?)])
            })
            .collect::<CliResult<Vec<_>>>()?;
        write_csv(dir, "equality.csv", &["theta1", "theta2", "benefit"], rows)?;
    }
    Ok(Outcome::ok(json, warnings))
}
