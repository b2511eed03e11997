//! Route, node and schedule types shared by every scheduler in the crate.
//!
//! Positions inside a route are 0-based. A node's `id` is the identifier it
//! carries in its instance file and is only used to resolve pickup/dropoff
//! partners and station charge rates.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Absolute tolerance used for every comparison on times, durations and energy.
pub const EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    OriginDepot,
    Pickup,
    Dropoff,
    Station,
    DestinationDepot,
}

/// One stop of a route.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub kind: NodeKind,
    /// Persons boarding (positive) or alighting (negative).
    pub load_delta: i32,
    pub service: f64,
    pub window_open: f64,
    pub window_close: f64,
    /// Maximum ride time of the request, set on pickups only.
    pub max_ride: Option<f64>,
    /// Id of the matching pickup or dropoff.
    pub partner: Option<usize>,
}

impl Node {
    pub fn origin_depot(id: usize, open: f64, close: f64) -> Self {
        Self::plain(id, NodeKind::OriginDepot, open, close)
    }

    pub fn destination_depot(id: usize, open: f64, close: f64) -> Self {
        Self::plain(id, NodeKind::DestinationDepot, open, close)
    }

    pub fn station(id: usize, open: f64, close: f64) -> Self {
        Self::plain(id, NodeKind::Station, open, close)
    }

    pub fn pickup(
        id: usize,
        dropoff_id: usize,
        load: i32,
        service: f64,
        window: (f64, f64),
        max_ride: f64,
    ) -> Self {
        Node {
            id,
            kind: NodeKind::Pickup,
            load_delta: load,
            service,
            window_open: window.0,
            window_close: window.1,
            max_ride: Some(max_ride),
            partner: Some(dropoff_id),
        }
    }

    pub fn dropoff(id: usize, pickup_id: usize, load: i32, service: f64, window: (f64, f64)) -> Self {
        Node {
            id,
            kind: NodeKind::Dropoff,
            load_delta: -load,
            service,
            window_open: window.0,
            window_close: window.1,
            max_ride: None,
            partner: Some(pickup_id),
        }
    }

    pub fn with_service(mut self, service: f64) -> Self {
        self.service = service;
        self
    }

    fn plain(id: usize, kind: NodeKind, open: f64, close: f64) -> Self {
        Node {
            id,
            kind,
            load_delta: 0,
            service: 0.0,
            window_open: open,
            window_close: close,
            max_ride: None,
            partner: None,
        }
    }
}

/// A request as it appears inside a particular route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Request {
    pub pickup: usize,
    pub dropoff: usize,
    pub direct: f64,
    pub max_ride: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum RouteError {
    #[error("route has no nodes")]
    Empty,
    #[error("expected {expected} leg travel times, got {got}")]
    LegCount { expected: usize, got: usize },
}

/// A fixed sequence of stops together with its travel data.
///
/// Construction only checks the shape of the inputs; semantic checks live in
/// [`validate_structure`] so that malformed routes can still be inspected.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteSequence {
    nodes: Vec<Node>,
    leg_travel: Vec<f64>,
    direct_travel: BTreeMap<usize, f64>,
    capacity: i32,
    requests: Vec<Request>,
}

impl RouteSequence {
    pub fn new(
        nodes: Vec<Node>,
        leg_travel: Vec<f64>,
        direct_travel: BTreeMap<usize, f64>,
        capacity: i32,
    ) -> Result<Self, RouteError> {
        if nodes.is_empty() {
            return Err(RouteError::Empty);
        }
        if leg_travel.len() + 1 != nodes.len() {
            return Err(RouteError::LegCount {
                expected: nodes.len() - 1,
                got: leg_travel.len(),
            });
        }
        let requests = pair_requests(&nodes, &direct_travel);
        Ok(RouteSequence {
            nodes,
            leg_travel,
            direct_travel,
            capacity,
            requests,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, pos: usize) -> &Node {
        &self.nodes[pos]
    }

    /// Travel time from position `pos` to `pos + 1`.
    pub fn leg(&self, pos: usize) -> f64 {
        self.leg_travel[pos]
    }

    pub fn legs(&self) -> &[f64] {
        &self.leg_travel
    }

    pub fn direct_travel(&self) -> &BTreeMap<usize, f64> {
        &self.direct_travel
    }

    pub fn capacity(&self) -> i32 {
        self.capacity
    }

    /// Requests whose pickup and dropoff both occur in the route, ordered by pickup position.
    pub fn requests(&self) -> &[Request] {
        &self.requests
    }

    pub fn has_stations(&self) -> bool {
        self.nodes.iter().any(|n| n.kind == NodeKind::Station)
    }

    /// Copies positions `first..=last` into a standalone route.
    pub fn slice(&self, first: usize, last: usize) -> RouteSequence {
        let nodes = self.nodes[first..=last].to_vec();
        let legs = self.leg_travel[first..last].to_vec();
        let ids: Vec<usize> = nodes.iter().map(|n| n.id).collect();
        let direct = self
            .direct_travel
            .iter()
            .filter(|(id, _)| ids.contains(id))
            .map(|(&id, &t)| (id, t))
            .collect();
        RouteSequence::new(nodes, legs, direct, self.capacity).expect("slice of a valid route")
    }

    /// Same route with the node at `pos` replaced.
    pub fn with_node(&self, pos: usize, node: Node) -> RouteSequence {
        let mut nodes = self.nodes.clone();
        nodes[pos] = node;
        RouteSequence::new(nodes, self.leg_travel.clone(), self.direct_travel.clone(), self.capacity)
            .expect("shape unchanged")
    }
}

fn pair_requests(nodes: &[Node], direct: &BTreeMap<usize, f64>) -> Vec<Request> {
    let mut out = Vec::new();
    for (p, node) in nodes.iter().enumerate() {
        if node.kind != NodeKind::Pickup {
            continue;
        }
        let Some(partner) = node.partner else { continue };
        let Some(d) = nodes
            .iter()
            .position(|n| n.id == partner && n.kind == NodeKind::Dropoff)
        else {
            continue;
        };
        out.push(Request {
            pickup: p,
            dropoff: d,
            direct: direct.get(&node.id).copied().unwrap_or(0.0),
            max_ride: node.max_ride.unwrap_or(f64::INFINITY),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// First node is not an origin depot.
    OriginDepot,
    /// Last node is not a destination depot.
    DestinationDepot,
    /// A depot appears somewhere other than the route ends.
    MisplacedDepot,
    InvertedWindow,
    /// Load sign does not agree with the node kind.
    LoadSign,
    /// Pickup or dropoff whose partner is missing from the route.
    Unpaired,
    /// Partner loads do not cancel.
    PartnerLoad,
    Precedence,
    CapacityExceeded,
    NegativeLoad,
    OnboardAtStation,
    /// Direct travel of a request exceeds the routed travel between its stops.
    DirectTravel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub index: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at position {}", self.kind, self.index)
    }
}

/// Checks the standing assumptions on a route: depot placement, windows,
/// load signs, pairing, precedence, capacity, empty vehicle at stations and
/// consistency of the direct travel times.
///
/// The load-range checks run only when precedence holds, since the running
/// load of a route that drops passengers before picking them up is
/// meaningless.
pub fn validate_structure(route: &RouteSequence) -> Vec<Violation> {
    let nodes = route.nodes();
    let last = nodes.len() - 1;
    let mut out = Vec::new();
    let mut push = |index, kind| out.push(Violation { index, kind });

    if nodes[0].kind != NodeKind::OriginDepot {
        push(0, ViolationKind::OriginDepot);
    }
    if nodes[last].kind != NodeKind::DestinationDepot {
        push(last, ViolationKind::DestinationDepot);
    }
    for (i, n) in nodes.iter().enumerate() {
        let depot = matches!(n.kind, NodeKind::OriginDepot | NodeKind::DestinationDepot);
        if depot && i != 0 && i != last {
            push(i, ViolationKind::MisplacedDepot);
        }
        if n.window_open > n.window_close {
            push(i, ViolationKind::InvertedWindow);
        }
        let sign_ok = match n.kind {
            NodeKind::Pickup => n.load_delta > 0,
            NodeKind::Dropoff => n.load_delta < 0,
            _ => n.load_delta == 0,
        };
        if !sign_ok {
            push(i, ViolationKind::LoadSign);
        }
        if matches!(n.kind, NodeKind::Pickup | NodeKind::Dropoff) {
            let want = if n.kind == NodeKind::Pickup {
                NodeKind::Dropoff
            } else {
                NodeKind::Pickup
            };
            match n
                .partner
                .and_then(|pid| nodes.iter().find(|m| m.id == pid && m.kind == want))
            {
                None => push(i, ViolationKind::Unpaired),
                Some(m) => {
                    if m.load_delta != -n.load_delta {
                        push(i, ViolationKind::PartnerLoad);
                    }
                }
            }
        }
    }

    let mut precedence_ok = true;
    for r in route.requests() {
        if r.dropoff < r.pickup {
            precedence_ok = false;
            push(r.dropoff, ViolationKind::Precedence);
        }
    }

    if precedence_ok {
        let mut load = 0i32;
        for (i, n) in nodes.iter().enumerate() {
            if n.kind == NodeKind::Station && load != 0 {
                push(i, ViolationKind::OnboardAtStation);
            }
            load += n.load_delta;
            if load > route.capacity() {
                push(i, ViolationKind::CapacityExceeded);
            }
            if load < 0 {
                push(i, ViolationKind::NegativeLoad);
            }
        }
        for r in route.requests() {
            let routed: f64 = route.legs()[r.pickup..r.dropoff].iter().sum();
            if r.direct > routed + EPS {
                push(r.pickup, ViolationKind::DirectTravel);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InfeasibilityReason {
    TimeWindow,
    RideTime,
    Battery,
    WaitShortage,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    Feasible,
    /// `node` is the route position at which the problem was first detected.
    Infeasible {
        reason: InfeasibilityReason,
        node: usize,
    },
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }

    pub fn reason(&self) -> Option<InfeasibilityReason> {
        match self {
            Verdict::Feasible => None,
            Verdict::Infeasible { reason, .. } => Some(*reason),
        }
    }
}

/// Waiting times and service start times for every position of a route.
///
/// `waits[i]` is the idle time spent before service starts at position `i`;
/// `waits[0]` holds the vehicle at the origin. For infeasible verdicts the
/// vectors hold whatever partial assignment the scheduler reached.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub waits: Vec<f64>,
    pub starts: Vec<f64>,
    pub excess: f64,
    pub verdict: Verdict,
}

impl Schedule {
    pub fn is_feasible(&self) -> bool {
        self.verdict.is_feasible()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimingViolationKind {
    /// Successor starts before service and travel from its predecessor finish.
    Travel,
    TimeWindow,
    RideTime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingViolation {
    pub index: usize,
    pub kind: TimingViolationKind,
    pub amount: f64,
}

/// Checks precedence of start times, time windows and maximum ride times of
/// `starts` against the raw route data, within [`EPS`].
pub fn check_timing(route: &RouteSequence, starts: &[f64]) -> Vec<TimingViolation> {
    let mut out = Vec::new();
    let nodes = route.nodes();
    for i in 0..nodes.len() {
        let n = &nodes[i];
        if starts[i] < n.window_open - EPS {
            out.push(TimingViolation {
                index: i,
                kind: TimingViolationKind::TimeWindow,
                amount: n.window_open - starts[i],
            });
        }
        if starts[i] > n.window_close + EPS {
            out.push(TimingViolation {
                index: i,
                kind: TimingViolationKind::TimeWindow,
                amount: starts[i] - n.window_close,
            });
        }
        if i + 1 < nodes.len() {
            let ready = starts[i] + n.service + route.leg(i);
            if ready > starts[i + 1] + EPS {
                out.push(TimingViolation {
                    index: i + 1,
                    kind: TimingViolationKind::Travel,
                    amount: ready - starts[i + 1],
                });
            }
        }
    }
    for r in route.requests() {
        let ride = starts[r.dropoff] - starts[r.pickup] - nodes[r.pickup].service;
        if ride > r.max_ride + EPS {
            out.push(TimingViolation {
                index: r.dropoff,
                kind: TimingViolationKind::RideTime,
                amount: ride - r.max_ride,
            });
        }
    }
    out.sort_by_key(|v| v.index);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const WIDE: (f64, f64) = (0.0, 1000.0);

    fn taxi(kinds_swapped: bool) -> RouteSequence {
        let p = Node::pickup(1, 2, 1, 1.0, WIDE, 30.0);
        let d = Node::dropoff(2, 1, 1, 1.0, WIDE);
        let mid = if kinds_swapped { vec![d, p] } else { vec![p, d] };
        let mut nodes = vec![Node::origin_depot(0, 0.0, 1000.0)];
        nodes.extend(mid);
        nodes.push(Node::destination_depot(3, 0.0, 1000.0));
        RouteSequence::new(nodes, vec![10.0; 3], BTreeMap::from([(1, 10.0)]), 1).unwrap()
    }

    #[test]
    fn minimal_route_is_clean() {
        assert!(validate_structure(&taxi(false)).is_empty());
    }

    #[test]
    fn swapped_pair_reports_precedence_only() {
        let v = validate_structure(&taxi(true));
        assert_eq!(
            v,
            vec![Violation {
                index: 1,
                kind: ViolationKind::Precedence
            }]
        );
    }

    #[test]
    fn station_with_passenger_onboard() {
        let nodes = vec![
            Node::origin_depot(0, 0.0, 1000.0),
            Node::pickup(1, 2, 1, 1.0, WIDE, 30.0),
            Node::station(9, 0.0, 1000.0),
            Node::dropoff(2, 1, 1, 1.0, WIDE),
            Node::destination_depot(3, 0.0, 1000.0),
        ];
        let route = RouteSequence::new(nodes, vec![5.0; 4], BTreeMap::from([(1, 10.0)]), 1).unwrap();
        assert_eq!(
            validate_structure(&route),
            vec![Violation {
                index: 2,
                kind: ViolationKind::OnboardAtStation
            }]
        );
    }

    #[test]
    fn capacity_and_direct_travel() {
        let nodes = vec![
            Node::origin_depot(0, 0.0, 1000.0),
            Node::pickup(1, 3, 1, 0.0, WIDE, 30.0),
            Node::pickup(2, 4, 1, 0.0, WIDE, 30.0),
            Node::dropoff(3, 1, 1, 0.0, WIDE),
            Node::dropoff(4, 2, 1, 0.0, WIDE),
            Node::destination_depot(5, 0.0, 1000.0),
        ];
        let route = RouteSequence::new(
            nodes,
            vec![1.0; 5],
            BTreeMap::from([(1, 2.0), (2, 2.5)]),
            1,
        )
        .unwrap();
        let v = validate_structure(&route);
        assert!(v.contains(&Violation {
            index: 2,
            kind: ViolationKind::CapacityExceeded
        }));
        assert!(v.contains(&Violation {
            index: 2,
            kind: ViolationKind::DirectTravel
        }));
        assert!(!v.iter().any(|x| x.index == 1 && x.kind == ViolationKind::DirectTravel));
    }

    #[test]
    fn leg_count_is_checked() {
        let nodes = vec![Node::origin_depot(0, 0.0, 1.0), Node::destination_depot(1, 0.0, 1.0)];
        assert_eq!(
            RouteSequence::new(nodes, vec![], BTreeMap::new(), 1),
            Err(RouteError::LegCount { expected: 1, got: 0 })
        );
    }

    #[test]
    fn timing_checker_flags_each_kind() {
        let route = taxi(false);
        assert!(check_timing(&route, &[0.0, 10.0, 21.0, 32.0]).is_empty());
        let v = check_timing(&route, &[0.0, 5.0, 60.0, 1200.0]);
        let kinds: Vec<_> = v.iter().map(|x| x.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TimingViolationKind::Travel,
                TimingViolationKind::RideTime,
                TimingViolationKind::TimeWindow
            ]
        );
    }
}
