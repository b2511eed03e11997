//! Ride-time oriented waiting-time distribution.
//!
//! The scheduler walks the route once. Whenever the waiting time assigned up
//! to the cursor falls short of `delta[cursor]`, the shortage is pushed onto
//! earlier positions in order of increasing on-board weight, each increment
//! limited by the ride-time budgets of requests it delays, by the window
//! upper bounds `theta` and by the shortage itself. When every candidate is
//! exhausted the recourse step moves waiting onto an earlier node that sits
//! on a saturated ride and restarts the walk behind it.

use std::collections::BTreeSet;

use crate::model::{InfeasibilityReason, RouteSequence, Schedule, Verdict, EPS};
use crate::preprocess::PreprocessedRoute;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchedulerOptions {
    /// Revisit earlier decisions when the candidate set runs dry.
    pub recourse: bool,
}

impl Default for SchedulerOptions {
    fn default() -> Self {
        SchedulerOptions { recourse: true }
    }
}

/// Working state of one scheduling run.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerState {
    pub waits: Vec<f64>,
    /// Positions whose waiting time may still grow.
    pub omega: BTreeSet<usize>,
    pub cursor: usize,
    pub start_node: usize,
    pub restarts: usize,
    /// Per request, waiting assigned strictly after the pickup up to the dropoff.
    ride_used: Vec<f64>,
}

impl SchedulerState {
    pub fn new(route: &RouteSequence) -> Self {
        SchedulerState {
            waits: vec![0.0; route.len()],
            omega: BTreeSet::new(),
            cursor: 0,
            start_node: 0,
            restarts: 0,
            ride_used: vec![0.0; route.requests().len()],
        }
    }

    /// State with a given wait vector, cursor at `cursor`.
    pub fn with_waits(route: &RouteSequence, waits: Vec<f64>, cursor: usize) -> Self {
        let mut st = SchedulerState::new(route);
        st.waits = waits;
        st.cursor = cursor;
        st.refresh_ride_used(route);
        st
    }

    /// Total waiting assigned to positions `0..=i`.
    pub fn assigned(&self, i: usize) -> f64 {
        self.waits[..=i].iter().sum()
    }

    fn add_wait(&mut self, j: usize, amount: f64, route: &RouteSequence) {
        self.waits[j] += amount;
        for (k, r) in route.requests().iter().enumerate() {
            if r.pickup < j && j <= r.dropoff {
                self.ride_used[k] += amount;
            }
        }
    }

    fn refresh_ride_used(&mut self, route: &RouteSequence) {
        for (k, r) in route.requests().iter().enumerate() {
            self.ride_used[k] = if r.pickup < r.dropoff {
                self.waits[r.pickup + 1..=r.dropoff].iter().sum()
            } else {
                0.0
            };
        }
    }
}

/// Waiting time a request can absorb between its pickup and dropoff before
/// its maximum ride time is reached.
pub fn ride_budget(route: &RouteSequence, pre: &PreprocessedRoute, request: usize) -> f64 {
    let r = &route.requests()[request];
    let routed = pre.cum[r.dropoff] - pre.cum[r.pickup] - route.node(r.pickup).service;
    r.max_ride - routed
}

// Remaining ride budget over requests that waiting at `j` would delay.
// `inclusive` also counts the request picked up at `j` itself.
fn ride_slack(
    j: usize,
    inclusive: bool,
    state: &SchedulerState,
    route: &RouteSequence,
    pre: &PreprocessedRoute,
) -> f64 {
    route
        .requests()
        .iter()
        .enumerate()
        .filter(|(_, r)| (r.pickup < j || (inclusive && r.pickup == j)) && j <= r.dropoff)
        .map(|(k, _)| ride_budget(route, pre, k) - state.ride_used[k])
        .fold(f64::INFINITY, f64::min)
}

// Room under the window upper bounds for extra waiting at `j`, checked on
// every prefix from `j` up to the cursor `i`.
fn theta_slack(j: usize, i: usize, state: &SchedulerState, pre: &PreprocessedRoute) -> f64 {
    let mut acc = state.assigned(j);
    let mut slack = pre.theta[j] - acc;
    for k in j + 1..=i {
        acc += state.waits[k];
        slack = slack.min(pre.theta[k] - acc);
    }
    slack
}

/// Largest feasible waiting increment at `j` given the shortage at the cursor.
pub fn max_wait_increment(
    j: usize,
    state: &SchedulerState,
    route: &RouteSequence,
    pre: &PreprocessedRoute,
) -> f64 {
    let i = state.cursor;
    let shortage = pre.delta[i] - state.assigned(i);
    let ride = ride_slack(j, false, state, route, pre);
    let window = theta_slack(j, i.max(j), state, pre);
    ride.min(window).min(shortage).max(0.0)
}

/// Smallest position in `omega` carrying the minimal weight.
pub fn argmin_load<W: PartialOrd + Copy>(omega: &BTreeSet<usize>, weights: &[W]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for &k in omega {
        match best {
            Some(b) if !(weights[k] < weights[b]) => {}
            _ => best = Some(k),
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecourseOutcome {
    Restart { start_node: usize },
    /// No saturated node could take more waiting. `saturated` tells whether
    /// any node was blocked by a maximum ride time at all.
    Fail { saturated: bool },
}

/// Moves waiting onto the earliest node blocked by a saturated ride that can
/// still take some, discarding every later decision.
pub fn recourse(
    state: &mut SchedulerState,
    route: &RouteSequence,
    pre: &PreprocessedRoute,
) -> RecourseOutcome {
    let i = state.cursor;
    let candidates: Vec<usize> = (0..=i)
        .filter(|&j| ride_slack(j, true, state, route, pre) <= EPS)
        .collect();
    for &j in &candidates {
        let mut waits = state.waits.clone();
        waits[j + 1..].iter_mut().for_each(|w| *w = 0.0);
        let mut trial = SchedulerState::with_waits(route, waits, i);
        let step = max_wait_increment(j, &trial, route, pre);
        if step > EPS {
            trial.add_wait(j, step, route);
            let start_node = j + 1;
            trial.cursor = j;
            trial.omega = (0..start_node)
                .filter(|&k| {
                    ride_slack(k, false, &trial, route, pre).min(theta_slack(k, j, &trial, pre)) > EPS
                })
                .collect();
            trial.start_node = start_node;
            trial.restarts = state.restarts;
            *state = trial;
            return RecourseOutcome::Restart { start_node };
        }
    }
    RecourseOutcome::Fail {
        saturated: !candidates.is_empty(),
    }
}

/// Schedules a station-free route with recourse enabled.
pub fn schedule_route(route: &RouteSequence, pre: &PreprocessedRoute) -> Schedule {
    schedule_route_with(route, pre, SchedulerOptions::default()).0
}

/// Schedules a station-free route and also returns the final working state.
pub fn schedule_route_with(
    route: &RouteSequence,
    pre: &PreprocessedRoute,
    opts: SchedulerOptions,
) -> (Schedule, SchedulerState) {
    let mut state = SchedulerState::new(route);
    let verdict = run(&mut state, route, pre, opts);
    let starts = build_times(&state.waits, pre);
    let excess = excess_ride_time(route, &starts);
    let schedule = Schedule {
        waits: state.waits.clone(),
        starts,
        excess,
        verdict,
    };
    (schedule, state)
}

fn infeasible(reason: InfeasibilityReason, node: usize) -> Verdict {
    Verdict::Infeasible { reason, node }
}

fn run(
    state: &mut SchedulerState,
    route: &RouteSequence,
    pre: &PreprocessedRoute,
    opts: SchedulerOptions,
) -> Verdict {
    if let Some(node) = pre.window_violation() {
        return infeasible(InfeasibilityReason::TimeWindow, node);
    }
    for (k, r) in route.requests().iter().enumerate() {
        if ride_budget(route, pre, k) < -EPS {
            return infeasible(InfeasibilityReason::RideTime, r.dropoff);
        }
    }
    let max_restarts = route.requests().len();
    let m = route.len();
    let mut i = 0;
    while i < m {
        state.cursor = i;
        state.omega.insert(i);
        loop {
            let shortage = pre.delta[i] - state.assigned(i);
            if shortage <= EPS {
                break;
            }
            if state.omega.is_empty() {
                if !opts.recourse {
                    let saturated = (0..=i).any(|j| ride_slack(j, true, state, route, pre) <= EPS);
                    return exhausted(saturated, i);
                }
                match recourse(state, route, pre) {
                    RecourseOutcome::Restart { start_node } => {
                        state.restarts += 1;
                        if state.restarts > max_restarts {
                            return infeasible(InfeasibilityReason::RideTime, i);
                        }
                        i = start_node;
                        state.cursor = i;
                        state.omega.insert(i);
                        continue;
                    }
                    RecourseOutcome::Fail { saturated } => return exhausted(saturated, i),
                }
            }
            let j = argmin_load(&state.omega, &pre.onboard).expect("omega is not empty");
            let step = max_wait_increment(j, state, route, pre);
            state.add_wait(j, step, route);
            if step < shortage - EPS {
                state.omega.remove(&j);
            }
        }
        i += 1;
    }
    Verdict::Feasible
}

fn exhausted(saturated: bool, node: usize) -> Verdict {
    let reason = if saturated {
        InfeasibilityReason::RideTime
    } else {
        InfeasibilityReason::WaitShortage
    };
    infeasible(reason, node)
}

/// `T_i = ET_0 + C_i + sum_{j<=i} w_j`.
pub fn build_times(waits: &[f64], pre: &PreprocessedRoute) -> Vec<f64> {
    let base = pre.et[0];
    let mut acc = 0.0;
    waits
        .iter()
        .zip(&pre.cum)
        .map(|(w, c)| {
            acc += w;
            base + c + acc
        })
        .collect()
}

/// Sum over requests of ride time beyond pickup service and direct travel.
pub fn excess_ride_time(route: &RouteSequence, starts: &[f64]) -> f64 {
    route
        .requests()
        .iter()
        .map(|r| starts[r.dropoff] - starts[r.pickup] - route.node(r.pickup).service - r.direct)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_timing, Node};
    use std::collections::BTreeMap;

    pub(crate) fn worked_example() -> RouteSequence {
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
    fn worked_example_schedule() {
        let route = worked_example();
        let pre = PreprocessedRoute::new(&route);
        let s = schedule_route(&route, &pre);
        assert_eq!(s.verdict, Verdict::Feasible);
        assert_eq!(s.waits, vec![19.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(s.starts, vec![19.0, 29.0, 40.0, 51.0, 62.0, 73.0]);
        assert!((s.excess - 2.0).abs() < 1e-12);
        assert!(check_timing(&route, &s.starts).is_empty());
    }

    #[test]
    fn no_shortage_means_no_waiting() {
        let route = worked_example().with_node(2, Node::pickup(2, 4, 1, 1.0, (0.0, 1000.0), 30.0));
        let pre = PreprocessedRoute::new(&route);
        let s = schedule_route(&route, &pre);
        assert!(s.is_feasible());
        assert!(s.waits.iter().all(|w| *w == 0.0));
        assert_eq!(s.starts, pre.et);
    }

    #[test]
    fn crossed_windows_are_reported() {
        let route = worked_example().with_node(3, Node::dropoff(3, 1, 1, 1.0, (0.0, 35.0)));
        let pre = PreprocessedRoute::new(&route);
        let s = schedule_route(&route, &pre);
        assert_eq!(
            s.verdict,
            Verdict::Infeasible {
                reason: InfeasibilityReason::TimeWindow,
                node: 3
            }
        );
    }

    #[test]
    fn increment_terms() {
        let route = worked_example();
        let pre = PreprocessedRoute::new(&route);
        let mut st = SchedulerState::new(&route);
        st.cursor = 2;
        // depot: nothing straddles, shortage binds
        assert_eq!(max_wait_increment(0, &st, &route, &pre), 19.0);
        // P2 sits inside request 1, whose ride budget is 30 - 21 = 9
        assert_eq!(max_wait_increment(2, &st, &route, &pre), 9.0);
        st.waits[2] = 4.0;
        st.refresh_ride_used(&route);
        assert_eq!(max_wait_increment(2, &st, &route, &pre), 5.0);
        // window bound exhausted
        let tight = route.with_node(0, Node::origin_depot(0, 0.0, 0.0));
        let pre = PreprocessedRoute::new(&tight);
        let st = SchedulerState::with_waits(&tight, vec![0.0; 6], 2);
        assert_eq!(max_wait_increment(0, &st, &tight, &pre), 0.0);
    }

    #[test]
    fn argmin_prefers_first_minimum() {
        let omega: BTreeSet<usize> = [1, 2, 3].into();
        assert_eq!(argmin_load(&omega, &[9, 0, 0, 1]), Some(1));
        let omega: BTreeSet<usize> = [3].into();
        assert_eq!(argmin_load(&omega, &[0, 0, 0, 7]), Some(3));
        let omega: BTreeSet<usize> = [2, 5].into();
        assert_eq!(argmin_load(&omega, &[0, 0, 3, 0, 0, 1]), Some(5));
        assert_eq!(argmin_load::<u32>(&BTreeSet::new(), &[]), None);
    }

    #[test]
    fn build_times_is_a_prefix_sum() {
        let route = worked_example();
        let pre = PreprocessedRoute::new(&route);
        let zero = build_times(&[0.0; 6], &pre);
        assert_eq!(zero, pre.cum);
        let mut w = [0.0; 6];
        w[5] = 3.0;
        let t = build_times(&w, &pre);
        assert_eq!(&t[..5], &zero[..5]);
        assert_eq!(t[5], zero[5] + 3.0);
    }

    #[test]
    fn taxi_route_has_no_excess() {
        let nodes = vec![
            Node::origin_depot(0, 0.0, 100.0),
            Node::pickup(1, 2, 1, 2.0, (0.0, 100.0), 20.0),
            Node::dropoff(2, 1, 1, 2.0, (0.0, 100.0)),
            Node::destination_depot(3, 0.0, 100.0),
        ];
        let route = RouteSequence::new(nodes, vec![5.0, 7.0, 5.0], BTreeMap::from([(1, 7.0)]), 1).unwrap();
        let pre = PreprocessedRoute::new(&route);
        let s = schedule_route(&route, &pre);
        assert!(s.is_feasible());
        assert_eq!(s.excess, 0.0);
    }

    #[test]
    fn ride_budget_violated_without_any_wait() {
        let route = worked_example().with_node(1, Node::pickup(1, 3, 1, 1.0, (0.0, 1000.0), 10.0));
        let pre = PreprocessedRoute::new(&route);
        let s = schedule_route(&route, &pre);
        assert_eq!(s.verdict.reason(), Some(InfeasibilityReason::RideTime));
    }
}
