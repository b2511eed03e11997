//! The two exact formulations of the timing problem on a small route, solved
//! with the bundled simplex.

use std::collections::BTreeMap;

use ridesched::oracle::{build_lp1, build_lp2, routing_constant, solve, LinearProgram, Sense};
use ridesched::{Node, PreprocessedRoute, RouteSequence};

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
    let route = RouteSequence::new(nodes, vec![10.0; 5], BTreeMap::from([(1, 20.0), (2, 20.0)]), 2).unwrap();
    let pre = PreprocessedRoute::new(&route);

    // start times
    let lp1 = build_lp1(&route);
    let out = solve(&lp1);
    let sol = out.solution().expect("feasible route");
    println!("start-time model: {} vars, {} rows", lp1.num_vars(), lp1.rows.len());
    println!("  T = {:?}, excess {}", sol.values, sol.objective);

    // waiting times on top of the earliest schedule
    let lp2 = build_lp2(&route, &pre);
    let out = solve(&lp2);
    let sol = out.solution().expect("feasible route");
    let constant = routing_constant(&route, &pre);
    println!("waiting-time model: w = {:?}", sol.values);
    println!("  weighted wait {} + routing constant {constant} = {}", sol.objective, sol.objective + constant);

    // the solver on its own
    let mut lp = LinearProgram::new();
    let x = lp.add_var(-3.0, 0.0, f64::INFINITY);
    let y = lp.add_var(-5.0, 0.0, f64::INFINITY);
    lp.add_row(vec![(x, 1.0)], Sense::Le, 4.0);
    lp.add_row(vec![(y, 2.0)], Sense::Le, 12.0);
    lp.add_row(vec![(x, 3.0), (y, 2.0)], Sense::Le, 18.0);
    let out = solve(&lp);
    let sol = out.solution().unwrap();
    println!("max 3x + 5y: x = {:?}, value {}, duals {:?}", sol.values, -sol.objective, sol.duals);
}
