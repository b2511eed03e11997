//! Exact linear-programming reference for the schedulers.

mod audit;
mod lp;
mod models;
mod simplex;

pub use audit::{audit, compare, AuditClass, AuditRecord, OPTIMALITY_TOL};
pub use lp::{Constraint, LinearProgram, Sense};
pub use models::{build_lp1, build_lp1_battery, build_lp2, routing_constant, BatteryLayout};
pub use simplex::{solve, LpOutcome, LpSolution};

use crate::battery::BatteryParams;
use crate::model::RouteSequence;

/// Minimum excess ride time of a route, ignoring any battery data.
pub fn optimal_excess(route: &RouteSequence) -> LpOutcome {
    solve(&build_lp1(route))
}

/// Minimum excess ride time of a route under the battery constraints.
pub fn optimal_excess_with_battery(route: &RouteSequence, params: &BatteryParams) -> LpOutcome {
    solve(&build_lp1_battery(route, params).0)
}
