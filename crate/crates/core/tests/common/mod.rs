#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ridesched::{Node, RouteSequence};

/// Random precedence-valid route with 1..=6 requests on Euclidean points.
/// Windows, ride limits, services and loads are drawn so that roughly half
/// of the routes admit a schedule.
pub fn random_route(seed: u64) -> RouteSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=6);
    let mut order = Vec::new();
    let mut open: Vec<usize> = Vec::new();
    let mut left: Vec<usize> = (1..=k).collect();
    while !left.is_empty() || !open.is_empty() {
        if !left.is_empty() && (open.is_empty() || rng.gen_bool(0.5)) {
            let p = left.remove(rng.gen_range(0..left.len()));
            order.push(p);
            open.push(p);
        } else {
            let p = open.remove(rng.gen_range(0..open.len()));
            order.push(p + k);
        }
    }
    let pts: Vec<(f64, f64)> = (0..=2 * k)
        .map(|_| (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0)))
        .collect();
    let dist = |a: usize, b: usize| {
        let (p, q) = (pts[a], pts[b]);
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    };
    let horizon = 300.0;
    let window = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.5) {
            let a = rng.gen_range(0.0..150.0);
            (a, a + rng.gen_range(0.0..40.0))
        } else {
            (0.0, horizon)
        }
    };
    let loads: Vec<i32> = (0..=k).map(|_| rng.gen_range(1..=2)).collect();
    let service = [0.0, 1.0, 2.0][rng.gen_range(0..3)];
    let mut nodes = vec![Node::origin_depot(0, 0.0, horizon)];
    let mut direct = BTreeMap::new();
    for &v in &order {
        if v <= k {
            let d = dist(v, v + k);
            direct.insert(v, d);
            let ride = d + service + rng.gen_range(0.0..40.0);
            nodes.push(Node::pickup(v, v + k, loads[v], service, window(&mut rng), ride));
        } else {
            nodes.push(Node::dropoff(v, v - k, loads[v - k], service, window(&mut rng)));
        }
    }
    nodes.push(Node::destination_depot(2 * k + 1, 0.0, horizon));
    let at = |id: usize| if id == 2 * k + 1 { 0 } else { id };
    let legs = nodes.windows(2).map(|w| dist(at(w[0].id), at(w[1].id))).collect();
    RouteSequence::new(nodes, legs, direct, 12).expect("well-formed route")
}

const OPEN: (f64, f64) = (0.0, 1000.0);

// Twelve nodes: a pickup whose request rides across a low-load stretch, a
// late window that forces waiting on that stretch, and a second late window
// whose waiting must also fall inside the same ride.
fn trap(a: f64, b: f64, ride: f64, c: f64, leg: f64) -> RouteSequence {
    let pk = |id, d, w, r| Node::pickup(id, d, 1, 0.0, w, r);
    let dr = |id, p, w| Node::dropoff(id, p, 1, 0.0, w);
    let nodes = vec![
        Node::origin_depot(0, 0.0, 0.0),
        pk(1, 11, OPEN, 100.0),
        pk(2, 12, (0.0, 2.0 * leg), 100.0),
        pk(3, 13, (0.0, 3.0 * leg), 100.0),
        pk(4, 14, OPEN, ride),
        dr(11, 1, OPEN),
        dr(12, 2, OPEN),
        pk(5, 15, (7.0 * leg + a, 1000.0), 100.0),
        dr(13, 3, (0.0, 8.0 * leg + a + c)),
        dr(15, 5, (9.0 * leg + a + b, 1000.0)),
        dr(14, 4, OPEN),
        Node::destination_depot(20, 0.0, 1000.0),
    ];
    let direct = BTreeMap::from([(1, 4.0 * leg), (2, 4.0 * leg), (3, 5.0 * leg), (4, 6.0 * leg), (5, 2.0 * leg)]);
    RouteSequence::new(nodes, vec![leg; 11], direct, 6).expect("well-formed route")
}

fn interleavings(k: usize, cur: &mut Vec<usize>, open: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left.is_empty() && open.is_empty() {
        out.push(cur.clone());
        return;
    }
    for q in 0..left.len() {
        let p = left.remove(q);
        cur.push(p);
        open.push(p);
        interleavings(k, cur, open, left, out);
        open.pop();
        cur.pop();
        left.insert(q, p);
    }
    for q in 0..open.len() {
        let p = open.remove(q);
        cur.push(p);
        interleavings(k, cur, open, left, out);
        cur.pop();
        open.insert(q, p);
    }
}

/// Candidate routes for the recourse family: a parameter grid over the trap
/// shape, plus every pickup/dropoff interleaving of the trap's five requests
/// for a few parameter settings. Callers filter for the routes where the
/// sweep without recourse fails.
pub fn recourse_candidates() -> Vec<RouteSequence> {
    let mut out = Vec::new();
    for leg in [1.0, 2.0, 3.0] {
        for a in 1..=8 {
            for b in 1..=8 {
                for slack in 0..=16 {
                    for c in 0..=3 {
                        out.push(trap(a as f64, b as f64, 6.0 * leg + slack as f64, c as f64, leg));
                    }
                }
            }
        }
    }
    let mut orders = Vec::new();
    interleavings(5, &mut vec![], &mut vec![], &mut (0..5).collect(), &mut orders);
    let pick = [1usize, 2, 3, 4, 7];
    let drop = [5usize, 6, 8, 10, 9];
    let unit = BTreeMap::from([(1, 1.0), (2, 1.0), (3, 1.0), (4, 1.0), (5, 1.0)]);
    for (a, b, slack, c) in [(5.0, 3.0, 6.0, 0.0), (3.0, 3.0, 4.0, 1.0), (2.0, 4.0, 5.0, 0.0), (6.0, 2.0, 7.0, 2.0)] {
        let base = trap(a, b, 6.0 + slack, c, 1.0);
        let nodes = base.nodes();
        for o in &orders {
            let mut seen = [false; 5];
            let mut seq = vec![nodes[0].clone()];
            for &r in o {
                let pos = if seen[r] { drop[r] } else { pick[r] };
                seen[r] = true;
                seq.push(nodes[pos].clone());
            }
            seq.push(nodes[11].clone());
            out.push(RouteSequence::new(seq, vec![1.0; 11], unit.clone(), 6).expect("well-formed route"));
        }
    }
    out
}
