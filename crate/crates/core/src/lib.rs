//! Minimum excess ride time scheduling of fixed dial-a-ride routes.
//!
//! A route is a fixed sequence of depots, pickups, dropoffs and charging
//! stations. [`scheduler::schedule_route`] assigns waiting times so that all
//! time windows and maximum ride times hold while the total excess ride time
//! of the passengers is as small as possible. [`battery`] adds charging
//! decisions for electric vehicles, [`baseline`] holds the classical
//! forward-slack procedure for comparison, and [`oracle`] solves the exact
//! linear programs used to audit both.

pub mod baseline;
pub mod battery;
pub mod bench;
pub mod ingest;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod routegen;
pub mod scheduler;

pub use battery::{plan_charging, BatteryParams, BatteryPlan};
pub use model::{
    check_timing, validate_structure, InfeasibilityReason, Node, NodeKind, RouteSequence, Schedule, Verdict, EPS,
};
pub use preprocess::PreprocessedRoute;
pub use scheduler::schedule_route;
