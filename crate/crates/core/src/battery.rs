//! Charging decisions for routes that visit charging stations.
//!
//! Stations can only be visited with an empty vehicle, so they cut a route
//! into independent timing problems. The segments are scheduled one after
//! the other: a station is reached as early as the previous segment allows,
//! the vehicle charges as long as the next segment's latest start and the
//! battery capacity permit, and the next segment is scheduled from the
//! resulting departure time. Levels are carried across the whole route.

use std::collections::BTreeMap;

use crate::model::{InfeasibilityReason, Node, NodeKind, RouteSequence, Schedule, Verdict, EPS};
use crate::preprocess::PreprocessedRoute;
use crate::scheduler::{excess_ride_time, schedule_route};

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryParams {
    pub capacity: f64,
    pub initial: f64,
    /// Required fraction of `capacity` left at the destination depot.
    pub end_ratio: f64,
    /// Energy used per unit of travel time.
    pub discharge: f64,
    /// Energy gained per unit of charging time, keyed by station node id.
    pub charge_rates: BTreeMap<usize, f64>,
    /// Rate used for stations missing from `charge_rates`.
    pub default_charge_rate: f64,
}

impl BatteryParams {
    pub fn charge_rate(&self, station_id: usize) -> f64 {
        self.charge_rates
            .get(&station_id)
            .copied()
            .unwrap_or(self.default_charge_rate)
    }

    pub fn end_level(&self) -> f64 {
        self.end_ratio * self.capacity
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatteryPlan {
    /// Level on arrival at each position.
    pub levels: Vec<f64>,
    /// `(position, duration)` for every station inside the route.
    pub charges: Vec<(usize, f64)>,
    pub verdict: Verdict,
    /// Timing the plan was built on; its verdict folds in the battery verdict.
    pub schedule: Schedule,
}

/// Inclusive position ranges between consecutive stations.
pub fn segment_bounds(route: &RouteSequence) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut first = 0;
    for (i, n) in route.nodes().iter().enumerate().skip(1) {
        if n.kind == NodeKind::Station || i + 1 == route.len() {
            out.push((first, i));
            first = i;
        }
    }
    if out.is_empty() {
        out.push((0, 0));
    }
    out
}

/// Sub-routes between stations; neighbouring pieces share their station.
pub fn split_at_stations(route: &RouteSequence) -> Vec<RouteSequence> {
    segment_bounds(route)
        .into_iter()
        .map(|(a, b)| route.slice(a, b))
        .collect()
}

fn battery_fail(node: usize) -> Verdict {
    Verdict::Infeasible {
        reason: InfeasibilityReason::Battery,
        node,
    }
}

/// Schedules `route` and decides how long to charge at each station.
pub fn plan_charging(route: &RouteSequence, pre: &PreprocessedRoute, params: &BatteryParams) -> BatteryPlan {
    if !route.has_stations() {
        let schedule = schedule_route(route, pre);
        return finish(route, pre, params, schedule.starts.clone(), Vec::new(), schedule.verdict);
    }
    if let Some(node) = pre.window_violation() {
        let verdict = Verdict::Infeasible {
            reason: InfeasibilityReason::TimeWindow,
            node,
        };
        return finish(route, pre, params, pre.et.clone(), Vec::new(), verdict);
    }

    let mut starts = pre.et.clone();
    let mut charges = Vec::new();
    let mut level = params.initial;

    for (a, b) in segment_bounds(route) {
        let planned = if a == 0 {
            0.0
        } else {
            let alpha = params.charge_rate(route.node(a).id);
            let dwell = pre.lt[a + 1] - route.leg(a) - starts[a] - route.node(a).service;
            let full = (params.capacity - level) / alpha;
            dwell.min(full).max(0.0)
        };
        let attempt = |extra: f64| {
            let depart = starts[a] + route.node(a).service + extra;
            schedule_segment(route, pre, a, b, depart)
        };

        let mut seg = attempt(planned);
        if !seg.is_feasible() && planned > 0.0 {
            let bare = attempt(0.0);
            if bare.is_feasible() {
                let (mut lo, mut hi) = (0.0, planned);
                seg = bare;
                for _ in 0..40 {
                    if hi - lo <= EPS {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    let s = attempt(mid);
                    if s.is_feasible() {
                        lo = mid;
                        seg = s;
                    } else {
                        hi = mid;
                    }
                }
            } else {
                seg = bare;
            }
        }
        if let Verdict::Infeasible { reason, node } = seg.verdict {
            starts_forward(route, &mut starts, a);
            let verdict = Verdict::Infeasible {
                reason,
                node: a + node,
            };
            return finish(route, pre, params, starts, charges, verdict);
        }

        // The segment origin stands for the departure from station `a`.
        starts[a + 1..=b].copy_from_slice(&seg.starts[1..]);
        if a == 0 {
            starts[0] = seg.starts[0];
        } else {
            let alpha = params.charge_rate(route.node(a).id);
            let dwell = starts[a + 1] - route.leg(a) - starts[a] - route.node(a).service;
            let full = (params.capacity - level) / alpha;
            let e = dwell.min(full).max(0.0);
            charges.push((a, e));
            level += alpha * e;
        }
        for i in a..b {
            level -= params.discharge * route.leg(i);
        }
    }
    finish(route, pre, params, starts, charges, Verdict::Feasible)
}

fn schedule_segment(route: &RouteSequence, pre: &PreprocessedRoute, a: usize, b: usize, depart: f64) -> Schedule {
    let mut seg = route.slice(a, b);
    if a > 0 {
        let close = pre.lt[a + 1] - route.leg(a);
        let origin = Node {
            service: 0.0,
            window_open: depart,
            window_close: close.max(depart),
            ..route.node(a).clone()
        };
        if depart > close + EPS {
            return Schedule {
                waits: vec![],
                starts: vec![],
                excess: 0.0,
                verdict: Verdict::Infeasible {
                    reason: InfeasibilityReason::TimeWindow,
                    node: 0,
                },
            };
        }
        seg = seg.with_node(0, origin);
    }
    let last = b - a;
    let tail = Node {
        window_close: pre.lt[b],
        ..seg.node(last).clone()
    };
    let seg = seg.with_node(last, tail);
    schedule_route(&seg, &PreprocessedRoute::new(&seg))
}

fn starts_forward(route: &RouteSequence, starts: &mut [f64], from: usize) {
    for i in from + 1..route.len() {
        let reach = starts[i - 1] + route.node(i - 1).service + route.leg(i - 1);
        starts[i] = reach.max(route.node(i).window_open);
    }
}

fn finish(
    route: &RouteSequence,
    pre: &PreprocessedRoute,
    params: &BatteryParams,
    starts: Vec<f64>,
    charges: Vec<(usize, f64)>,
    timing: Verdict,
) -> BatteryPlan {
    let levels = sweep_levels(route, params, &charges);
    let verdict = if timing.is_feasible() {
        battery_verdict(params, &levels)
    } else {
        timing
    };
    let schedule = Schedule {
        waits: waits_from_starts(route, pre, &starts),
        excess: excess_ride_time(route, &starts),
        starts,
        verdict,
    };
    BatteryPlan {
        levels,
        charges,
        verdict,
        schedule,
    }
}

/// Waits implied by start times: idle time before each service start.
pub fn waits_from_starts(route: &RouteSequence, pre: &PreprocessedRoute, starts: &[f64]) -> Vec<f64> {
    let mut w = Vec::with_capacity(starts.len());
    w.push(starts[0] - pre.et[0]);
    for i in 1..starts.len() {
        w.push(starts[i] - starts[i - 1] - route.node(i - 1).service - route.leg(i - 1));
    }
    w
}

/// Levels on arrival given the charging durations.
pub fn sweep_levels(route: &RouteSequence, params: &BatteryParams, charges: &[(usize, f64)]) -> Vec<f64> {
    let mut levels = Vec::with_capacity(route.len());
    let mut b = params.initial;
    levels.push(b);
    for i in 0..route.len() - 1 {
        if let Some(&(_, e)) = charges.iter().find(|(p, _)| *p == i) {
            b += params.charge_rate(route.node(i).id) * e;
        }
        b -= params.discharge * route.leg(i);
        levels.push(b);
    }
    levels
}

fn battery_verdict(params: &BatteryParams, levels: &[f64]) -> Verdict {
    if let Some(i) = levels.iter().position(|b| *b < -EPS) {
        return battery_fail(i);
    }
    let last = levels.len() - 1;
    if levels[last] < params.end_level() - EPS {
        return battery_fail(last);
    }
    Verdict::Feasible
}

/// Charges as long as possible inside the dwell a fixed schedule leaves at
/// each station.
pub fn charge_within_schedule(
    route: &RouteSequence,
    pre: &PreprocessedRoute,
    schedule: &Schedule,
    params: &BatteryParams,
) -> BatteryPlan {
    let starts = &schedule.starts;
    let mut charges = Vec::new();
    let mut level = params.initial;
    for i in 0..route.len() - 1 {
        let n = route.node(i);
        if n.kind == NodeKind::Station {
            let alpha = params.charge_rate(n.id);
            let dwell = starts[i + 1] - route.leg(i) - starts[i] - n.service;
            let e = dwell.min((params.capacity - level) / alpha).max(0.0);
            charges.push((i, e));
            level += alpha * e;
        }
        level -= params.discharge * route.leg(i);
    }
    finish(route, pre, params, starts.clone(), charges, schedule.verdict)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BatteryViolationKind {
    InitialLevel,
    /// Level does not follow from the previous level, charge and travel.
    Balance,
    BelowEmpty,
    AboveCapacity,
    NegativeCharge,
    /// Charging past the battery capacity.
    Overcharge,
    /// Charging longer than the vehicle stays at the station.
    ChargeExceedsDwell,
    ChargeOutsideStation,
    EndLevel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatteryViolation {
    pub index: usize,
    pub kind: BatteryViolationKind,
}

/// Re-derives every battery constraint from the raw data of a plan.
pub fn check_battery_constraints(
    route: &RouteSequence,
    schedule: &Schedule,
    plan: &BatteryPlan,
    params: &BatteryParams,
) -> Vec<BatteryViolation> {
    use BatteryViolationKind as K;
    let mut out = Vec::new();
    let mut push = |index, kind| out.push(BatteryViolation { index, kind });
    let b = &plan.levels;
    let t = &schedule.starts;
    let m = route.len();
    let charge_at = |i: usize| plan.charges.iter().filter(|(p, _)| *p == i).map(|(_, e)| *e).sum::<f64>();

    for &(p, e) in &plan.charges {
        if p + 1 >= m || route.node(p).kind != NodeKind::Station {
            push(p, K::ChargeOutsideStation);
        }
        if e < -EPS {
            push(p, K::NegativeCharge);
        }
    }
    if (b[0] - params.initial).abs() > EPS {
        push(0, K::InitialLevel);
    }
    for i in 0..m {
        if b[i] < -EPS {
            push(i, K::BelowEmpty);
        }
        if b[i] > params.capacity + EPS {
            push(i, K::AboveCapacity);
        }
        if i + 1 == m {
            break;
        }
        let n = route.node(i);
        let e = charge_at(i);
        let gained = if n.kind == NodeKind::Station {
            params.charge_rate(n.id) * e
        } else {
            0.0
        };
        if n.kind == NodeKind::Station {
            if b[i] + gained > params.capacity + EPS {
                push(i, K::Overcharge);
            }
            let dwell = t[i + 1] - route.leg(i) - t[i] - n.service;
            if e > dwell + EPS {
                push(i, K::ChargeExceedsDwell);
            }
        }
        let expect = b[i] + gained - params.discharge * route.leg(i);
        if (b[i + 1] - expect).abs() > EPS {
            push(i + 1, K::Balance);
        }
    }
    if b[m - 1] < params.end_level() - EPS {
        push(m - 1, K::EndLevel);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_timing;

    const WIDE: (f64, f64) = (0.0, 1000.0);

    fn params(capacity: f64, initial: f64, end_ratio: f64, discharge: f64) -> BatteryParams {
        BatteryParams {
            capacity,
            initial,
            end_ratio,
            discharge,
            charge_rates: BTreeMap::new(),
            default_charge_rate: 1.0,
        }
    }

    fn taxi_pair(first_id: usize) -> Vec<Node> {
        vec![
            Node::pickup(first_id, first_id + 1, 1, 0.0, WIDE, 100.0),
            Node::dropoff(first_id + 1, first_id, 1, 0.0, WIDE),
        ]
    }

    fn with_station(depot_close: f64) -> RouteSequence {
        let mut nodes = vec![Node::origin_depot(0, 0.0, 1000.0)];
        nodes.extend(taxi_pair(1));
        nodes.push(Node::station(50, 0.0, 1000.0));
        nodes.extend(taxi_pair(3));
        nodes.push(Node::destination_depot(99, 0.0, depot_close));
        let direct = BTreeMap::from([(1, 10.0), (3, 10.0)]);
        RouteSequence::new(nodes, vec![10.0; 6], direct, 1).unwrap()
    }

    #[test]
    fn splitting() {
        let route = with_station(1000.0);
        let parts = split_at_stations(&route);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].len() + parts[1].len() - 1, route.len());
        assert_eq!(parts[0].node(3).kind, NodeKind::Station);
        assert_eq!(parts[1].node(0).kind, NodeKind::Station);

        let nodes = vec![
            Node::origin_depot(0, 0.0, 9.0),
            Node::station(1, 0.0, 9.0),
            Node::station(2, 0.0, 9.0),
            Node::destination_depot(3, 0.0, 9.0),
        ];
        let two = RouteSequence::new(nodes, vec![1.0; 3], BTreeMap::new(), 1).unwrap();
        assert_eq!(segment_bounds(&two), vec![(0, 1), (1, 2), (2, 3)]);

        let nodes = vec![Node::origin_depot(0, 0.0, 9.0), Node::destination_depot(1, 0.0, 9.0)];
        let plain = RouteSequence::new(nodes, vec![1.0], BTreeMap::new(), 1).unwrap();
        assert_eq!(split_at_stations(&plain), vec![plain.clone()]);
    }

    #[test]
    fn pure_discharge() {
        let mut nodes = vec![Node::origin_depot(0, 0.0, 100.0)];
        nodes.extend(taxi_pair(1));
        nodes.push(Node::destination_depot(3, 0.0, 100.0));
        let route = RouteSequence::new(nodes, vec![10.0; 3], BTreeMap::from([(1, 10.0)]), 1).unwrap();
        let pre = PreprocessedRoute::new(&route);
        let p = params(10.0, 10.0, 0.5, 4.0 / 30.0);
        let plan = plan_charging(&route, &pre, &p);
        assert!(plan.verdict.is_feasible());
        assert!(plan.charges.is_empty());
        assert!((plan.levels[3] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn full_charge_term_binds() {
        // station reached at 30, next pickup must start by 45: dwell 5
        let route = with_station(65.0);
        let pre = PreprocessedRoute::new(&route);
        // level at the station is 10 - 0.1 * 30 = 7, three short of capacity
        let p = params(10.0, 10.0, 0.0, 0.1);
        let plan = plan_charging(&route, &pre, &p);
        assert_eq!(plan.verdict, Verdict::Feasible);
        assert_eq!(plan.charges.len(), 1);
        assert!((plan.charges[0].1 - 3.0).abs() < 1e-9);
        assert!(check_timing(&route, &plan.schedule.starts).is_empty());
        assert!(check_battery_constraints(&route, &plan.schedule, &plan, &p).is_empty());
    }

    #[test]
    fn dwell_term_binds() {
        let route = with_station(62.0);
        let pre = PreprocessedRoute::new(&route);
        let p = params(10.0, 10.0, 0.0, 0.1);
        let plan = plan_charging(&route, &pre, &p);
        assert!((plan.charges[0].1 - 2.0).abs() < 1e-9);
    }

    #[test]
    fn deficit_before_any_station() {
        let route = with_station(1000.0);
        let pre = PreprocessedRoute::new(&route);
        let p = params(10.0, 2.0, 0.0, 0.1);
        let plan = plan_charging(&route, &pre, &p);
        assert_eq!(plan.verdict, battery_fail(3));
    }

    #[test]
    fn checker_catches_overlong_charge_and_accepts_boundary() {
        let route = with_station(65.0);
        let pre = PreprocessedRoute::new(&route);
        let p = params(10.0, 10.0, 0.0, 0.1);
        let mut plan = plan_charging(&route, &pre, &p);
        let schedule = plan.schedule.clone();
        // exact end level boundary
        let mut q = p.clone();
        q.end_ratio = plan.levels[6] / q.capacity;
        assert!(check_battery_constraints(&route, &schedule, &plan, &q).is_empty());

        plan.charges[0].1 = 6.0;
        plan.levels = sweep_levels(&route, &p, &plan.charges);
        let kinds: Vec<_> = check_battery_constraints(&route, &schedule, &plan, &p)
            .into_iter()
            .map(|v| v.kind)
            .collect();
        assert!(kinds.contains(&BatteryViolationKind::ChargeExceedsDwell));
        assert!(kinds.contains(&BatteryViolationKind::Overcharge));
    }
}
