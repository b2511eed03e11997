//! Running the schedulers over a corpus and auditing them against the oracle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::baseline::eight_step;
use crate::battery::{charge_within_schedule, plan_charging, BatteryParams};
use crate::ingest::report::{ReportRow, ResultRow};
use crate::model::{InfeasibilityReason, RouteSequence, Schedule, Verdict};
use crate::oracle::{audit, optimal_excess, optimal_excess_with_battery, AuditClass, AuditRecord, LpOutcome};
use crate::preprocess::PreprocessedRoute;
use crate::scheduler::schedule_route;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Alg1,
    EightStep,
    Oracle,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::EightStep => "eight-step",
            Algorithm::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alg1" => Ok(Algorithm::Alg1),
            "eight-step" => Ok(Algorithm::EightStep),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// A route together with the battery data of its instance, if any.
#[derive(Debug, Clone)]
pub struct Job {
    pub record: usize,
    pub instance_id: String,
    pub vehicle_id: usize,
    pub route: RouteSequence,
    pub battery: Option<BatteryParams>,
}

/// Runs one heuristic. With battery data the charging plan is included.
pub fn run_heuristic(alg: Algorithm, route: &RouteSequence, battery: Option<&BatteryParams>) -> Schedule {
    let pre = PreprocessedRoute::new(route);
    match (alg, battery) {
        (Algorithm::Alg1, None) => schedule_route(route, &pre),
        (Algorithm::Alg1, Some(p)) => plan_charging(route, &pre, p).schedule,
        (Algorithm::EightStep, None) => eight_step(route, &pre),
        (Algorithm::EightStep, Some(p)) => {
            let s = eight_step(route, &pre);
            charge_within_schedule(route, &pre, &s, p).schedule
        }
        (Algorithm::Oracle, _) => panic!("the oracle is not a heuristic"),
    }
}

pub fn run_oracle(route: &RouteSequence, battery: Option<&BatteryParams>) -> LpOutcome {
    match battery {
        None => optimal_excess(route),
        Some(p) => optimal_excess_with_battery(route, p),
    }
}

/// Microseconds per call: median of `repeats` timed calls after one warm-up
/// call whose result is returned.
fn timed<T>(repeats: usize, mut f: impl FnMut() -> T) -> (T, f64) {
    let out = f();
    if repeats == 0 {
        return (out, 0.0);
    }
    let mut samples: Vec<f64> = (0..repeats)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(f());
            t.elapsed().as_secs_f64() * 1e6
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    (out, samples[samples.len() / 2])
}

#[derive(Debug, Clone)]
pub struct HeuristicResult {
    pub alg: Algorithm,
    pub schedule: Schedule,
    pub audit: AuditRecord,
    pub cpu_us: f64,
}

#[derive(Debug, Clone)]
pub struct RouteAudit {
    pub record: usize,
    pub instance_id: String,
    pub vehicle_id: usize,
    pub size: usize,
    pub oracle: LpOutcome,
    pub oracle_us: f64,
    pub results: Vec<HeuristicResult>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchOptions {
    /// Timed repetitions per call; 0 disables timing.
    pub repeats: usize,
    pub parallel: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            repeats: 3,
            parallel: true,
        }
    }
}

fn audit_job(job: &Job, algs: &[Algorithm], opts: BenchOptions) -> RouteAudit {
    let battery = job.battery.as_ref();
    let (oracle, oracle_us) = timed(opts.repeats, || run_oracle(&job.route, battery));
    let results = algs
        .iter()
        .filter(|a| **a != Algorithm::Oracle)
        .map(|&alg| {
            let (schedule, cpu_us) = timed(opts.repeats, || run_heuristic(alg, &job.route, battery));
            HeuristicResult {
                alg,
                audit: audit(&schedule, &oracle),
                schedule,
                cpu_us,
            }
        })
        .collect();
    RouteAudit {
        record: job.record,
        instance_id: job.instance_id.clone(),
        vehicle_id: job.vehicle_id,
        size: job.route.len(),
        oracle,
        oracle_us,
        results,
    }
}

/// Audits every job; output order follows `jobs` regardless of parallelism.
pub fn audit_jobs(jobs: &[Job], algs: &[Algorithm], opts: BenchOptions) -> Vec<RouteAudit> {
    if opts.parallel {
        jobs.par_iter().map(|j| audit_job(j, algs, opts)).collect()
    } else {
        jobs.iter().map(|j| audit_job(j, algs, opts)).collect()
    }
}

/// Aggregated statistics of one algorithm on one instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub name: String,
    pub alg: String,
    pub n_routes: usize,
    pub size_min: usize,
    pub size_max: usize,
    pub n_oracle_feasible: usize,
    pub n_infeasible: usize,
    pub n_incorrect_infeasible: usize,
    pub n_unsound: usize,
    pub n_oracle_failures: usize,
    pub n_deviating: usize,
    /// Deviating routes whose optimum is zero; excluded from `avg_dev_pct`.
    pub n_zero_optimum_deviating: usize,
    pub avg_dev_pct: f64,
    pub avg_cpu_ms: f64,
    pub median_cpu_us: f64,
    pub by_reason: BTreeMap<String, usize>,
}

impl Summary {
    pub fn row(&self) -> ReportRow {
        ReportRow {
            name: self.name.clone(),
            n_routes: self.n_routes,
            size_min: self.size_min,
            size_max: self.size_max,
            alg: self.alg.clone(),
            n_infeasible: self.n_infeasible,
            n_deviating: self.n_deviating,
            avg_dev_pct: self.avg_dev_pct,
            avg_cpu_ms: self.avg_cpu_ms,
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

pub fn reason_name(r: InfeasibilityReason) -> &'static str {
    match r {
        InfeasibilityReason::TimeWindow => "TW",
        InfeasibilityReason::RideTime => "RT",
        InfeasibilityReason::Battery => "BATT",
        InfeasibilityReason::WaitShortage => "WAIT",
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BenchReport {
    pub summaries: Vec<Summary>,
}

impl BenchReport {
    /// One summary per instance (in first-seen order) and algorithm, the
    /// oracle first.
    pub fn from_audits(audits: &[RouteAudit], algs: &[Algorithm]) -> Self {
        let mut instances: Vec<&str> = Vec::new();
        for a in audits {
            if !instances.contains(&a.instance_id.as_str()) {
                instances.push(&a.instance_id);
            }
        }
        let mut summaries = Vec::new();
        for name in instances {
            let group: Vec<&RouteAudit> = audits.iter().filter(|a| a.instance_id == name).collect();
            let base = Summary {
                name: name.to_string(),
                n_routes: group.len(),
                size_min: group.iter().map(|a| a.size).min().unwrap_or(0),
                size_max: group.iter().map(|a| a.size).max().unwrap_or(0),
                n_oracle_feasible: group.iter().filter(|a| a.oracle.objective().is_some()).count(),
                ..Summary::default()
            };
            let mut oracle = Summary {
                alg: Algorithm::Oracle.name().into(),
                n_infeasible: base.n_routes - base.n_oracle_feasible,
                n_oracle_failures: group
                    .iter()
                    .filter(|a| matches!(a.oracle, LpOutcome::Unbounded | LpOutcome::IterationLimit))
                    .count(),
                ..base.clone()
            };
            let times: Vec<f64> = group.iter().map(|a| a.oracle_us).collect();
            oracle.avg_cpu_ms = times.iter().sum::<f64>() / times.len().max(1) as f64 / 1000.0;
            oracle.median_cpu_us = median(times);
            summaries.push(oracle);

            for &alg in algs.iter().filter(|a| **a != Algorithm::Oracle) {
                let mut s = Summary {
                    alg: alg.name().into(),
                    ..base.clone()
                };
                let mut times = Vec::new();
                let mut dev_sum = 0.0;
                let mut dev_n = 0;
                for a in &group {
                    let Some(r) = a.results.iter().find(|r| r.alg == alg) else { continue };
                    times.push(r.cpu_us);
                    if let Verdict::Infeasible { reason, .. } = r.schedule.verdict {
                        s.n_infeasible += 1;
                        *s.by_reason.entry(reason_name(reason).into()).or_default() += 1;
                    }
                    match r.audit.class {
                        AuditClass::IncorrectInfeasibility => s.n_incorrect_infeasible += 1,
                        AuditClass::UnsoundFeasible => s.n_unsound += 1,
                        AuditClass::OracleFailure => s.n_oracle_failures += 1,
                        AuditClass::Deviating {
                            relative, zero_optimum, ..
                        } => {
                            s.n_deviating += 1;
                            if zero_optimum {
                                s.n_zero_optimum_deviating += 1;
                            } else {
                                dev_sum += relative * 100.0;
                                dev_n += 1;
                            }
                        }
                        AuditClass::Optimal | AuditClass::BothInfeasible => {}
                    }
                }
                s.avg_dev_pct = if dev_n > 0 { dev_sum / dev_n as f64 } else { 0.0 };
                s.avg_cpu_ms = times.iter().sum::<f64>() / times.len().max(1) as f64 / 1000.0;
                s.median_cpu_us = median(times);
                summaries.push(s);
            }
        }
        BenchReport { summaries }
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        self.summaries.iter().map(Summary::row).collect()
    }

    /// Problems with the main scheduler's statistics; empty when it passes.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in self.summaries.iter().filter(|s| s.alg == Algorithm::Alg1.name()) {
            let feasible = s.n_oracle_feasible.max(1) as f64;
            if s.n_unsound > 0 {
                out.push(format!("{}: {} unsound feasible verdicts", s.name, s.n_unsound));
            }
            if s.n_incorrect_infeasible as f64 > 1e-4 * feasible {
                out.push(format!(
                    "{}: {} incorrect infeasibility declarations out of {} feasible routes",
                    s.name, s.n_incorrect_infeasible, s.n_oracle_feasible
                ));
            }
            if s.n_deviating as f64 > 1e-3 * feasible {
                out.push(format!("{}: {} deviating schedules", s.name, s.n_deviating));
            }
            if s.avg_dev_pct > 5.0 {
                out.push(format!("{}: mean deviation {:.3}%", s.name, s.avg_dev_pct));
            }
        }
        out
    }
}

/// Per-route rows for a single algorithm, in job order.
pub fn schedule_rows(jobs: &[Job], alg: Algorithm, repeats: usize) -> Vec<ResultRow> {
    jobs.par_iter()
        .map(|job| {
            let battery = job.battery.as_ref();
            let (verdict, excess, cpu_us) = if alg == Algorithm::Oracle {
                let (lp, us) = timed(repeats, || run_oracle(&job.route, battery));
                match lp.objective() {
                    Some(v) => (Verdict::Feasible, Some(v), us),
                    None => (
                        Verdict::Infeasible {
                            reason: InfeasibilityReason::TimeWindow,
                            node: 0,
                        },
                        None,
                        us,
                    ),
                }
            } else {
                let (s, us) = timed(repeats, || run_heuristic(alg, &job.route, battery));
                (s.verdict, s.is_feasible().then_some(s.excess), us)
            };
            let (reason, node) = match verdict {
                Verdict::Feasible => (String::new(), None),
                Verdict::Infeasible { reason, node } if alg != Algorithm::Oracle => {
                    (reason_name(reason).to_string(), Some(node))
                }
                Verdict::Infeasible { .. } => ("LP".to_string(), None),
            };
            ResultRow {
                record: job.record,
                instance_id: job.instance_id.clone(),
                vehicle_id: job.vehicle_id,
                size: job.route.len(),
                alg: alg.name().into(),
                feasible: verdict.is_feasible(),
                reason,
                node,
                excess,
                cpu_us,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Node;

    fn job(record: usize, dropoff_close: f64) -> Job {
        let wide = (0.0, 1000.0);
        let nodes = vec![
            Node::origin_depot(0, 0.0, 1000.0),
            Node::pickup(1, 3, 1, 1.0, wide, 30.0),
            Node::pickup(2, 4, 1, 1.0, (40.0, 1000.0), 30.0),
            Node::dropoff(3, 1, 1, 1.0, (0.0, dropoff_close)),
            Node::dropoff(4, 2, 1, 1.0, wide),
            Node::destination_depot(5, 0.0, 1000.0),
        ];
        let direct = BTreeMap::from([(1, 20.0), (2, 20.0)]);
        Job {
            record,
            instance_id: "toy".into(),
            vehicle_id: 0,
            route: RouteSequence::new(nodes, vec![10.0; 5], direct, 2).unwrap(),
            battery: None,
        }
    }

    #[test]
    fn toy_corpus() {
        let jobs = vec![job(0, 1000.0), job(1, 1000.0)];
        let algs = [Algorithm::Alg1];
        let opts = BenchOptions {
            repeats: 0,
            parallel: false,
        };
        let report = BenchReport::from_audits(&audit_jobs(&jobs, &algs, opts), &algs);
        assert_eq!(report.summaries.len(), 2);
        assert_eq!(report.summaries[1].n_deviating, 0);
        assert!(report.check().is_empty());

        let jobs = vec![job(0, 1000.0), job(1, 35.0)];
        let report = BenchReport::from_audits(&audit_jobs(&jobs, &algs, opts), &algs);
        assert_eq!(report.summaries[0].n_infeasible, 1);
        assert_eq!(report.summaries[1].n_infeasible, 1);
        assert_eq!(report.summaries[1].n_incorrect_infeasible, 0);
        assert_eq!(report.summaries[1].by_reason.get("TW"), Some(&1));
    }

    #[test]
    fn parallel_order_is_stable() {
        let jobs: Vec<Job> = (0..20).map(|i| job(i, if i % 3 == 0 { 35.0 } else { 1000.0 })).collect();
        let opts = BenchOptions {
            repeats: 0,
            parallel: true,
        };
        let audits = audit_jobs(&jobs, &[Algorithm::Alg1, Algorithm::EightStep], opts);
        assert!(audits.iter().enumerate().all(|(i, a)| a.record == i));
        let rows = schedule_rows(&jobs, Algorithm::Alg1, 0);
        assert_eq!(rows[1].excess, Some(2.0));
        assert!(!rows[0].feasible);
    }
}
