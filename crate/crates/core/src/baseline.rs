//! The classical eight-step forward-slack procedure.
//!
//! Start from the earliest schedule, push the departure from the depot as
//! late as the forward slack allows without creating new waiting, then do
//! the same at every pickup in route order, and finally check the result.
//! Forward slack at `i` is
//! `min_{j >= i} ( sum_{i < p <= j} W_p + max(0, min(l_j - B_j, u - P_j)) )`
//! where `P_j` is the current ride of the request dropped at `j`, counted
//! only when its pickup lies before `i`.

use crate::model::{check_timing, InfeasibilityReason, NodeKind, RouteSequence, Schedule, TimingViolationKind, Verdict};
use crate::preprocess::PreprocessedRoute;
use crate::scheduler::excess_ride_time;

struct Timeline<'a> {
    route: &'a RouteSequence,
    starts: Vec<f64>,
    waits: Vec<f64>,
    // pickup position of the request dropped at each position
    pickup_of: Vec<Option<usize>>,
}

impl<'a> Timeline<'a> {
    fn new(route: &'a RouteSequence, depart: f64) -> Self {
        let m = route.len();
        let mut pickup_of = vec![None; m];
        for r in route.requests() {
            pickup_of[r.dropoff] = Some(r.pickup);
        }
        let mut tl = Timeline {
            route,
            starts: vec![depart; m],
            waits: vec![0.0; m],
            pickup_of,
        };
        tl.forward(0);
        tl
    }

    // Recomputes arrivals, waits and starts after position `from`.
    fn forward(&mut self, from: usize) {
        for i in from + 1..self.route.len() {
            let prev = self.route.node(i - 1);
            let arrival = self.starts[i - 1] + prev.service + self.route.leg(i - 1);
            let start = arrival.max(self.route.node(i).window_open);
            self.waits[i] = start - arrival;
            self.starts[i] = start;
        }
    }

    fn forward_slack(&self, i: usize) -> f64 {
        let mut waited = 0.0;
        let mut best = f64::INFINITY;
        for j in i..self.route.len() {
            if j > i {
                waited += self.waits[j];
            }
            let mut room = self.route.node(j).window_close - self.starts[j];
            if let Some(p) = self.pickup_of[j] {
                if p < i {
                    let max_ride = self.route.node(p).max_ride.unwrap_or(f64::INFINITY);
                    let ride = self.starts[j] - self.starts[p] - self.route.node(p).service;
                    room = room.min(max_ride - ride);
                }
            }
            best = best.min(waited + room.max(0.0));
        }
        best
    }

    fn onward_waiting(&self, i: usize) -> f64 {
        let last = self.route.len() - 1;
        if i + 1 > last {
            return 0.0;
        }
        self.waits[i + 1..last].iter().sum()
    }

    fn delay(&mut self, i: usize) {
        let shift = self.forward_slack(i).min(self.onward_waiting(i)).max(0.0);
        if shift > 0.0 {
            self.starts[i] += shift;
            self.waits[i] += shift;
            self.forward(i);
        }
    }
}

pub fn eight_step(route: &RouteSequence, pre: &PreprocessedRoute) -> Schedule {
    let mut tl = Timeline::new(route, pre.et[0]);
    tl.delay(0);
    for i in 1..route.len() {
        if route.node(i).kind == NodeKind::Pickup {
            tl.delay(i);
        }
    }
    let violations = check_timing(route, &tl.starts);
    let verdict = match violations.first() {
        None => Verdict::Feasible,
        Some(v) => Verdict::Infeasible {
            reason: match v.kind {
                TimingViolationKind::RideTime => InfeasibilityReason::RideTime,
                _ => InfeasibilityReason::TimeWindow,
            },
            node: v.index,
        },
    };
    let mut waits = tl.waits;
    waits[0] = tl.starts[0] - pre.et[0];
    Schedule {
        excess: excess_ride_time(route, &tl.starts),
        starts: tl.starts,
        waits,
        verdict,
    }
}
