//! Tightened start-time bounds and cumulative waiting-time bounds of a route.
//!
//! With `C_i` the travel plus service accumulated before position `i` and
//! `ET_0` the earliest departure, every schedule can be written as
//! `T_i = ET_0 + C_i + W_i` where `W_i` is the waiting time assigned up to and
//! including `i`. Time windows then become `delta[i] <= W_i <= theta[i]`.

use thiserror::Error;

use crate::model::{RouteSequence, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("time windows cannot be met at position {node}")]
pub struct WindowInfeasible {
    pub node: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessedRoute {
    pub et: Vec<f64>,
    pub lt: Vec<f64>,
    pub cum: Vec<f64>,
    pub delta: Vec<f64>,
    pub theta: Vec<f64>,
    /// Persons on board when arriving at each position.
    pub load: Vec<i32>,
    /// Requests on board when arriving at each position. This is the weight
    /// of a unit of waiting in the excess ride time objective.
    pub onboard: Vec<u32>,
    window_violation: Option<usize>,
}

impl PreprocessedRoute {
    pub fn new(route: &RouteSequence) -> Self {
        let et = compute_earliest(route);
        let lt = compute_latest(route);
        let cum = cumulative_travel(route);
        let (delta, theta) = raw_bounds(&et, &lt, &cum);
        let window_violation = first_window_miss(route, &et);
        PreprocessedRoute {
            et,
            lt,
            cum,
            delta,
            theta,
            load: cumulative_load(route),
            onboard: onboard_requests(route),
            window_violation,
        }
    }

    pub fn len(&self) -> usize {
        self.et.len()
    }

    pub fn is_empty(&self) -> bool {
        self.et.is_empty()
    }

    /// First position whose window cannot be met by any schedule, if any.
    pub fn window_violation(&self) -> Option<usize> {
        self.window_violation
    }
}

/// `ET_0 = arr_0`, `ET_i = max(arr_i, ET_{i-1} + s_{i-1} + t_{i-1,i})`.
pub fn compute_earliest(route: &RouteSequence) -> Vec<f64> {
    let nodes = route.nodes();
    let mut et = Vec::with_capacity(nodes.len());
    et.push(nodes[0].window_open);
    for i in 1..nodes.len() {
        let reach = et[i - 1] + nodes[i - 1].service + route.leg(i - 1);
        et.push(nodes[i].window_open.max(reach));
    }
    et
}

/// `LT_last = dep_last`, `LT_i = min(dep_i, LT_{i+1} - t_{i,i+1} - s_i)`.
pub fn compute_latest(route: &RouteSequence) -> Vec<f64> {
    let nodes = route.nodes();
    let m = nodes.len();
    let mut lt = vec![0.0; m];
    lt[m - 1] = nodes[m - 1].window_close;
    for i in (0..m - 1).rev() {
        let latest = lt[i + 1] - route.leg(i) - nodes[i].service;
        lt[i] = nodes[i].window_close.min(latest);
    }
    lt
}

/// `C_i`: travel and service time accumulated strictly before position `i`.
pub fn cumulative_travel(route: &RouteSequence) -> Vec<f64> {
    let nodes = route.nodes();
    let mut cum = Vec::with_capacity(nodes.len());
    cum.push(0.0);
    for i in 1..nodes.len() {
        cum.push(cum[i - 1] + route.leg(i - 1) + nodes[i - 1].service);
    }
    cum
}

/// Lower and upper bounds on the cumulative waiting time up to each position.
pub fn compute_bounds(
    route: &RouteSequence,
    et: &[f64],
    lt: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), WindowInfeasible> {
    let cum = cumulative_travel(route);
    let (delta, theta) = raw_bounds(et, lt, &cum);
    if delta.iter().zip(&theta).any(|(d, t)| d > &(t + EPS)) {
        let node = first_window_miss(route, et).unwrap_or_else(|| {
            delta
                .iter()
                .zip(&theta)
                .position(|(d, t)| d > &(t + EPS))
                .unwrap()
        });
        return Err(WindowInfeasible { node });
    }
    Ok((delta, theta))
}

fn raw_bounds(et: &[f64], lt: &[f64], cum: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let base = et[0];
    let delta = et.iter().zip(cum).map(|(e, c)| e - base - c).collect();
    let theta = lt.iter().zip(cum).map(|(l, c)| l - base - c).collect();
    (delta, theta)
}

// Bounds cross exactly when some earliest start misses its own window close,
// so that node is reported as the cause.
fn first_window_miss(route: &RouteSequence, et: &[f64]) -> Option<usize> {
    route
        .nodes()
        .iter()
        .zip(et)
        .position(|(n, e)| *e > n.window_close + EPS)
}

/// `L_i = sum_{j<i} l_j`.
pub fn cumulative_load(route: &RouteSequence) -> Vec<i32> {
    let mut load = 0;
    route
        .nodes()
        .iter()
        .map(|n| {
            let before = load;
            load += n.load_delta;
            before
        })
        .collect()
}

/// Number of requests picked up before position `i` and dropped at or after it.
pub fn onboard_requests(route: &RouteSequence) -> Vec<u32> {
    let mut diff = vec![0i64; route.len() + 1];
    for r in route.requests() {
        if r.pickup < r.dropoff {
            diff[r.pickup + 1] += 1;
            diff[r.dropoff + 1] -= 1;
        }
    }
    let mut acc = 0i64;
    diff[..route.len()]
        .iter()
        .map(|d| {
            acc += d;
            acc as u32
        })
        .collect()
}
