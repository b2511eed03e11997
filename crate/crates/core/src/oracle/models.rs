//! The linear models used as ground truth.
//!
//! `build_lp1` works directly on service start times and shares nothing with
//! the preprocessing code, which is what makes it usable as an independent
//! reference. `build_lp2` is the waiting-time formulation solved by the
//! scheduler and exists mainly so the two formulations can be checked
//! against each other.

use super::lp::{LinearProgram, Sense};
use crate::battery::BatteryParams;
use crate::model::{NodeKind, RouteSequence};
use crate::preprocess::PreprocessedRoute;
use crate::scheduler::ride_budget;

/// Sum of `direct + pickup service` over the requests of a route.
fn excess_offset(route: &RouteSequence) -> f64 {
    route
        .requests()
        .iter()
        .map(|r| r.direct + route.node(r.pickup).service)
        .sum()
}

// Excess objective and ride rows over start-time variables `t[pos]`.
fn add_rides(lp: &mut LinearProgram, route: &RouteSequence, t: &[usize]) {
    for r in route.requests() {
        lp.objective[t[r.dropoff]] += 1.0;
        lp.objective[t[r.pickup]] -= 1.0;
        if r.max_ride.is_finite() {
            lp.add_row(
                vec![(t[r.dropoff], 1.0), (t[r.pickup], -1.0)],
                Sense::Le,
                r.max_ride + route.node(r.pickup).service,
            );
        }
    }
    lp.objective_offset = -excess_offset(route);
}

/// Minimum excess ride time over start times `T_i` (variable `i`).
///
/// Windows are variable bounds, consecutive starts are separated by service
/// and travel, and each request's ride is capped. Stations are treated as
/// ordinary stops.
pub fn build_lp1(route: &RouteSequence) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let t: Vec<usize> = route
        .nodes()
        .iter()
        .map(|n| lp.add_var(0.0, n.window_open, n.window_close))
        .collect();
    for i in 0..route.len() - 1 {
        lp.add_row(
            vec![(t[i + 1], 1.0), (t[i], -1.0)],
            Sense::Ge,
            route.leg(i) + route.node(i).service,
        );
    }
    add_rides(&mut lp, route, &t);
    lp
}

/// Waiting-time model: minimise the on-board weighted waiting subject to
/// prefix bounds `delta[i] <= W_i <= theta[i]` and per-request ride budgets.
///
/// The objective carries no offset; add [`routing_constant`] to obtain the
/// excess ride time.
pub fn build_lp2(route: &RouteSequence, pre: &PreprocessedRoute) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let m = route.len();
    let w: Vec<usize> = (0..m)
        .map(|i| lp.add_var(f64::from(pre.onboard[i]), 0.0, f64::INFINITY))
        .collect();
    for i in 0..m {
        let prefix: Vec<(usize, f64)> = w[..=i].iter().map(|&v| (v, 1.0)).collect();
        if pre.delta[i] > 0.0 {
            lp.add_row(prefix.clone(), Sense::Ge, pre.delta[i]);
        }
        if pre.theta[i].is_finite() {
            lp.add_row(prefix, Sense::Le, pre.theta[i]);
        }
    }
    for (k, r) in route.requests().iter().enumerate() {
        if r.pickup >= r.dropoff || !r.max_ride.is_finite() {
            continue;
        }
        let span = w[r.pickup + 1..=r.dropoff].iter().map(|&v| (v, 1.0)).collect();
        lp.add_row(span, Sense::Le, ride_budget(route, pre, k));
    }
    lp
}

/// Excess ride time of the schedule without any waiting.
pub fn routing_constant(route: &RouteSequence, pre: &PreprocessedRoute) -> f64 {
    route
        .requests()
        .iter()
        .map(|r| pre.cum[r.dropoff] - pre.cum[r.pickup] - route.node(r.pickup).service - r.direct)
        .sum()
}

/// Variable layout of [`build_lp1_battery`].
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryLayout {
    pub start: Vec<usize>,
    pub level: Vec<usize>,
    /// `(position, variable)` for each station.
    pub charge: Vec<(usize, usize)>,
}

/// Start-time model extended with battery levels on arrival `B_i`, charging
/// durations `E_s` at stations, and the end-of-route level requirement.
pub fn build_lp1_battery(route: &RouteSequence, params: &BatteryParams) -> (LinearProgram, BatteryLayout) {
    let mut lp = LinearProgram::new();
    let m = route.len();
    let start: Vec<usize> = route
        .nodes()
        .iter()
        .map(|n| lp.add_var(0.0, n.window_open, n.window_close))
        .collect();
    let level: Vec<usize> = (0..m).map(|_| lp.add_var(0.0, 0.0, params.capacity)).collect();
    let mut charge = Vec::new();
    for (i, n) in route.nodes().iter().enumerate() {
        if n.kind == NodeKind::Station && i + 1 < m {
            charge.push((i, lp.add_var(0.0, 0.0, f64::INFINITY)));
        }
    }
    let charge_at = |i: usize| charge.iter().find(|(p, _)| *p == i).map(|&(_, v)| v);

    lp.add_row(vec![(level[0], 1.0)], Sense::Eq, params.initial);
    for i in 0..m - 1 {
        let gap = route.leg(i) + route.node(i).service;
        let used = params.discharge * route.leg(i);
        match charge_at(i) {
            Some(e) => {
                let alpha = params.charge_rate(route.node(i).id);
                lp.add_row(vec![(start[i + 1], 1.0), (start[i], -1.0), (e, -1.0)], Sense::Ge, gap);
                lp.add_row(
                    vec![(level[i + 1], 1.0), (level[i], -1.0), (e, -alpha)],
                    Sense::Eq,
                    -used,
                );
                lp.add_row(vec![(level[i], 1.0), (e, alpha)], Sense::Le, params.capacity);
            }
            None => {
                lp.add_row(vec![(start[i + 1], 1.0), (start[i], -1.0)], Sense::Ge, gap);
                lp.add_row(vec![(level[i + 1], 1.0), (level[i], -1.0)], Sense::Eq, -used);
            }
        }
    }
    lp.add_row(vec![(level[m - 1], 1.0)], Sense::Ge, params.end_level());
    add_rides(&mut lp, route, &start);
    (lp, BatteryLayout { start, level, charge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Node;
    use crate::oracle::simplex::{solve, LpOutcome};
    use std::collections::BTreeMap;

    fn worked() -> RouteSequence {
        let wide = (0.0, 1000.0);
        let nodes = vec![
            Node::origin_depot(0, 0.0, 1000.0),
            Node::pickup(1, 3, 1, 1.0, wide, 30.0),
            Node::pickup(2, 4, 1, 1.0, (40.0, 1000.0), 30.0),
            Node::dropoff(3, 1, 1, 1.0, wide),
            Node::dropoff(4, 2, 1, 1.0, wide),
            Node::destination_depot(5, 0.0, 1000.0),
        ];
        RouteSequence::new(nodes, vec![10.0; 5], BTreeMap::from([(1, 20.0), (2, 20.0)]), 2).unwrap()
    }

    #[test]
    fn lp2_of_worked_example() {
        let route = worked();
        let pre = PreprocessedRoute::new(&route);
        let lp = build_lp2(&route, &pre);
        assert_eq!(lp.num_vars(), 6);
        let sol = solve(&lp);
        assert!(sol.objective().unwrap().abs() < 1e-9);
        assert_eq!(routing_constant(&route, &pre), 2.0);
    }

    #[test]
    fn lp1_of_worked_example() {
        let sol = solve(&build_lp1(&worked()));
        assert!((sol.objective().unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn lp2_without_shortage_is_zero() {
        let route = worked().with_node(2, Node::pickup(2, 4, 1, 1.0, (0.0, 1000.0), 30.0));
        let pre = PreprocessedRoute::new(&route);
        let sol = solve(&build_lp2(&route, &pre));
        let sol = sol.solution().unwrap();
        assert_eq!(sol.objective, 0.0);
        assert!(sol.values.iter().all(|w| *w == 0.0));
    }

    #[test]
    fn crossed_bounds_make_lp2_infeasible() {
        let route = worked().with_node(3, Node::dropoff(3, 1, 1, 1.0, (0.0, 35.0)));
        let pre = PreprocessedRoute::new(&route);
        assert_eq!(solve(&build_lp2(&route, &pre)), LpOutcome::Infeasible);
        assert_eq!(solve(&build_lp1(&route)), LpOutcome::Infeasible);
    }

    fn station_route(gap: f64) -> RouteSequence {
        let wide = (0.0, 1000.0);
        let nodes = vec![
            Node::origin_depot(0, 0.0, 1000.0),
            Node::pickup(1, 2, 1, 0.0, wide, 30.0),
            Node::dropoff(2, 1, 1, 0.0, wide),
            Node::station(7, 0.0, 1000.0),
            Node::destination_depot(3, 0.0, 40.0 + gap),
        ];
        RouteSequence::new(nodes, vec![10.0; 4], BTreeMap::from([(1, 10.0)]), 1).unwrap()
    }

    fn params(initial: f64, end_ratio: f64) -> BatteryParams {
        BatteryParams {
            capacity: 10.0,
            initial,
            end_ratio,
            discharge: 0.1,
            charge_rates: BTreeMap::from([(7, 1.0)]),
            default_charge_rate: 1.0,
        }
    }

    #[test]
    fn battery_model_with_ample_dwell_matches_timing_model() {
        let route = station_route(20.0);
        let (lp, layout) = build_lp1_battery(&route, &params(5.0, 0.5));
        let sol = solve(&lp);
        let plain = solve(&build_lp1(&route));
        assert!((sol.objective().unwrap() - plain.objective().unwrap()).abs() < 1e-9);
        assert_eq!(layout.charge.len(), 1);
    }

    #[test]
    fn unreachable_end_level_is_infeasible() {
        // 4 units of travel at 0.1, at most 1 time unit to charge at rate 1
        let route = station_route(1.0);
        let (lp, _) = build_lp1_battery(&route, &params(4.0, 0.5));
        assert_eq!(solve(&lp), LpOutcome::Infeasible);
        let (lp, _) = build_lp1_battery(&route, &params(4.0, 0.05));
        assert!(solve(&lp).objective().is_some());
    }
}
