//! A route where waiting at the least loaded node uses up a ride-time
//! budget that a later shortage needs. Without recourse the sweep gives up;
//! with it the wait moves to an earlier pickup.

use std::collections::BTreeMap;

use ridesched::oracle::optimal_excess;
use ridesched::scheduler::{schedule_route_with, SchedulerOptions};
use ridesched::{Node, PreprocessedRoute, RouteSequence};

pub fn main() {
    let open = (0.0, 1000.0);
    let pk = |id, d, w, r| Node::pickup(id, d, 1, 0.0, w, r);
    let dr = |id, p, w| Node::dropoff(id, p, 1, 0.0, w);
    let nodes = vec![
        Node::origin_depot(0, 0.0, 0.0),
        pk(1, 11, open, 100.0),
        pk(2, 12, (0.0, 2.0), 100.0),
        pk(3, 13, (0.0, 3.0), 100.0),
        pk(4, 14, open, 12.0),
        dr(11, 1, open),
        dr(12, 2, open),
        pk(5, 15, (12.0, 1000.0), 100.0),
        dr(13, 3, (0.0, 13.0)),
        dr(15, 5, (17.0, 1000.0)),
        dr(14, 4, open),
        Node::destination_depot(20, 0.0, 1000.0),
    ];
    let direct = BTreeMap::from([(1, 4.0), (2, 4.0), (3, 5.0), (4, 6.0), (5, 2.0)]);
    let route = RouteSequence::new(nodes, vec![1.0; 11], direct, 6).expect("well-formed route");
    let pre = PreprocessedRoute::new(&route);
    println!("requests on board while waiting: {:?}", pre.onboard);

    for recourse in [false, true] {
        let (s, state) = schedule_route_with(&route, &pre, SchedulerOptions { recourse });
        println!("recourse {recourse}: {:?} after {} restarts", s.verdict, state.restarts);
        if s.is_feasible() {
            println!("  waits {:?}, excess {}", s.waits, s.excess);
        }
    }
    println!("oracle optimum {:?}", optimal_excess(&route).objective());
}
