//! Six-node route with one late pickup window: the shortage is absorbed at
//! the depot, where nobody is on board.

use std::collections::BTreeMap;

use ridesched::oracle::optimal_excess;
use ridesched::{check_timing, schedule_route, Node, PreprocessedRoute, RouteSequence};

pub fn main() {
    let wide = (0.0, 1000.0);
    let nodes = vec![
        Node::origin_depot(0, 0.0, 1000.0),
        Node::pickup(1, 3, 1, 1.0, wide, 30.0),
        Node::pickup(2, 4, 1, 1.0, (40.0, 1000.0), 30.0),
        Node::dropoff(3, 1, 1, 1.0, wide),
        Node::dropoff(4, 2, 1, 1.0, wide),
        Node::destination_depot(5, 0.0, 1000.0),
    ];
    let direct = BTreeMap::from([(1, 20.0), (2, 20.0)]);
    let route = RouteSequence::new(nodes, vec![10.0; 5], direct, 2).expect("well-formed route");

    let pre = PreprocessedRoute::new(&route);
    println!("ET    {:?}", pre.et);
    println!("LT    {:?}", pre.lt);
    println!("delta {:?}", pre.delta);
    println!("theta {:?}", pre.theta);

    let s = schedule_route(&route, &pre);
    println!("verdict {:?}", s.verdict);
    println!("waits   {:?}", s.waits);
    println!("starts  {:?}", s.starts);
    println!("excess  {}", s.excess);
    assert!(check_timing(&route, &s.starts).is_empty());

    let lp = optimal_excess(&route);
    println!("oracle  {:?}", lp.objective());
}
