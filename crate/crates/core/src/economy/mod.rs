//! Concrete economies expressed as builders for games and frontiers.

mod allocation;
mod carpool;
mod equality;
mod fund;

pub use allocation::{
    allocation_value, coalition_value_from_allocations, PriceVector, ResourceAllocation,
};
pub use carpool::{
    budget_balanced, build_carpool_game, carpool_revenues, carpool_surplus, carpool_utility,
    surplus_optimal_assignment, Assignment, CarpoolModel, CarpoolSpec, Trip, TripSpec, MAX_RIDERS,
};
pub use equality::{equality_frontier, equality_paradox_check, EqualityBenefitModel, ParadoxCheck};
pub use fund::build_fund_game;
