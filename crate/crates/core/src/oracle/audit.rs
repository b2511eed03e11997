use super::simplex::LpOutcome;
use crate::model::{Schedule, EPS};

/// Agreement between a heuristic schedule and the exact optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuditClass {
    BothInfeasible,
    /// Heuristic gave up on a route that has a feasible schedule.
    IncorrectInfeasibility,
    Optimal,
    /// Feasible but worse than the optimum. `relative` is
    /// `(heuristic - optimum) / max(optimum, EPS)`; when the optimum is zero
    /// it is meaningless and `zero_optimum` is set, `absolute` then carries
    /// the information.
    Deviating {
        relative: f64,
        absolute: f64,
        zero_optimum: bool,
    },
    /// Heuristic claims feasibility the oracle refutes.
    UnsoundFeasible,
    /// The oracle itself did not reach a verdict.
    OracleFailure,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditRecord {
    pub class: AuditClass,
    pub heuristic: Option<f64>,
    pub optimum: Option<f64>,
}

/// Relative tolerance under which two objective values count as equal.
pub const OPTIMALITY_TOL: f64 = 1e-6;

pub fn audit(heuristic: &Schedule, oracle: &LpOutcome) -> AuditRecord {
    let h = heuristic.is_feasible().then_some(heuristic.excess);
    let optimum = oracle.objective();
    let class = match (oracle, h) {
        (LpOutcome::Unbounded | LpOutcome::IterationLimit, _) => AuditClass::OracleFailure,
        (LpOutcome::Infeasible, None) => AuditClass::BothInfeasible,
        (LpOutcome::Infeasible, Some(_)) => AuditClass::UnsoundFeasible,
        (LpOutcome::Optimal(_), None) => AuditClass::IncorrectInfeasibility,
        (LpOutcome::Optimal(s), Some(h)) => compare(h, s.objective),
    };
    AuditRecord {
        class,
        heuristic: h,
        optimum,
    }
}

/// Classifies a feasible heuristic objective `h` against optimum `o`.
pub fn compare(h: f64, o: f64) -> AuditClass {
    if (h - o).abs() <= OPTIMALITY_TOL * o.abs().max(1.0) {
        return AuditClass::Optimal;
    }
    AuditClass::Deviating {
        relative: (h - o) / o.max(EPS),
        absolute: h - o,
        zero_optimum: o.abs() <= EPS,
    }
}
