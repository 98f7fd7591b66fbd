//! Shared value economics toolkit.
//!
//! Graph-restricted coalitional games with core and convexity checks,
//! compromise and goal programming over bicriteria frontiers, and
//! measures of value created when a frontier moves.

pub mod coalition;
pub mod economy;
pub mod error;
pub mod frontier;
pub mod game_file;
pub mod lp;
pub mod mcdm;
pub mod solution;
pub mod svc;

pub use coalition::{
    best_coalition_structure, coalition_sum, count_non_singleton_coalitions, cs_value,
    enumerate_feasible_coalitions, is_feasible, AgentGraph, AgentSet, CharacteristicFunction,
    Coalition, CoalitionStructure, MAX_AGENTS, MAX_EXHAUSTIVE_AGENTS,
};
pub use error::{Error, Result};
pub use frontier::{Frontier, ThetaPoint};
pub use game_file::{CoalitionValue, GameSpec, LoadedGame};
pub use mcdm::{
    balanced_solution, compromise_set, compromise_solution, cp_distance, gp_solve,
    CompromisePoint, CompromiseSet, CriterionSpec, DistanceOrder, GoalSpec, GpSolution,
};
pub use solution::{
    classify, classify_with_tol, core_nonempty, core_nonempty_with_tol, is_convex, is_in_core,
    is_in_core_with_tol, GameClassification, PayoffVector,
};
pub use svc::{auc, hypervolume, svc_with_targets, svc_without_targets, Hypervolume, SvcReport};
