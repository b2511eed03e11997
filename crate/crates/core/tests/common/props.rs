// Property bodies shared by the invariant suite and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::random_route;
use ridesched::ingest::corpus::{parse_record, render_record};
use ridesched::ingest::{read_corpus, write_corpus, CorpusRecord};
use ridesched::oracle::{build_lp1, build_lp2, routing_constant, solve, LinearProgram, Sense};
use ridesched::scheduler::excess_ride_time;
use ridesched::{check_timing, schedule_route, PreprocessedRoute, EPS};

pub const CASES: u32 = 10_000;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1.0)
}

pub fn waiting_bounds_are_monotone(seed: u64) -> Result<(), TestCaseError> {
    let route = random_route(seed);
    let pre = PreprocessedRoute::new(&route);
    prop_assert_eq!(pre.delta[0], 0.0);
    for i in 1..route.len() {
        prop_assert!(pre.delta[i] >= pre.delta[i - 1] - EPS);
        prop_assert!(pre.theta[i] >= pre.theta[i - 1] - EPS);
    }
    if pre.window_violation().is_none() {
        for i in 0..route.len() {
            prop_assert!(pre.delta[i] <= pre.theta[i] + EPS);
        }
    }
    Ok(())
}

pub fn objective_identity(seed: u64) -> Result<(), TestCaseError> {
    let route = random_route(seed);
    let pre = PreprocessedRoute::new(&route);
    let s = schedule_route(&route, &pre);
    if s.is_feasible() {
        let weighted: f64 = s.waits.iter().zip(&pre.onboard).map(|(w, n)| w * f64::from(*n)).sum();
        let identity = weighted + routing_constant(&route, &pre);
        prop_assert!(close(s.excess, identity), "{} vs {}", s.excess, identity);
        prop_assert!(close(s.excess, excess_ride_time(&route, &s.starts)));
    }
    // the same identity between the two exact models
    let lp1 = solve(&build_lp1(&route)).objective();
    let lp2 = solve(&build_lp2(&route, &pre))
        .objective()
        .map(|v| v + routing_constant(&route, &pre));
    match (lp1, lp2) {
        (Some(a), Some(b)) => prop_assert!(close(a, b), "{} vs {}", a, b),
        (None, None) => {}
        other => prop_assert!(false, "models disagree on feasibility: {:?}", other),
    }
    Ok(())
}

pub fn start_bounds_match_lp(seed: u64, pick: prop::sample::Index) -> Result<(), TestCaseError> {
    let route = random_route(seed);
    let pre = PreprocessedRoute::new(&route);
    let i = pick.index(route.len());
    // windows and travel only
    let full = build_lp1(&route);
    let mut lp = LinearProgram::new();
    for j in 0..full.num_vars() {
        lp.add_var(0.0, full.lower[j], full.upper[j]);
    }
    for row in full.rows.iter().filter(|r| r.sense == Sense::Ge) {
        lp.add_row(row.coeffs.clone(), row.sense, row.rhs);
    }
    lp.objective[i] = 1.0;
    let lo = solve(&lp).objective();
    if pre.window_violation().is_some() {
        prop_assert!(lo.is_none(), "crossed bounds but the LP found {:?}", lo);
        return Ok(());
    }
    lp.objective[i] = -1.0;
    let hi = solve(&lp).objective().map(|v| -v);
    prop_assert!(close(lo.unwrap(), pre.et[i]), "ET {} vs {:?}", pre.et[i], lo);
    prop_assert!(close(hi.unwrap(), pre.lt[i]), "LT {} vs {:?}", pre.lt[i], hi);
    Ok(())
}

pub fn schedules_are_sound(seed: u64) -> Result<(), TestCaseError> {
    let route = random_route(seed);
    let pre = PreprocessedRoute::new(&route);
    let s = schedule_route(&route, &pre);
    let lp = build_lp1(&route);
    let out = solve(&lp);
    if s.is_feasible() {
        let bad = check_timing(&route, &s.starts);
        prop_assert!(bad.is_empty(), "{:?}", bad);
        prop_assert!(s.waits.iter().all(|w| *w >= -EPS));
        let opt = out.objective();
        prop_assert!(opt.is_some(), "feasible verdict on an infeasible route");
        let opt = opt.unwrap();
        prop_assert!(s.excess >= opt - 1e-6 * opt.abs().max(1.0));
    }
    if let Some(sol) = out.solution() {
        prop_assert!(lp.max_violation(&sol.values) <= 1e-6);
    }
    Ok(())
}

pub fn records() -> impl Strategy<Value = Vec<CorpusRecord>> {
    prop::collection::vec(
        ("[a-z0-9_.-]{1,12}", 0usize..50, prop::collection::vec(0usize..500, 2..42)).prop_map(
            |(instance_id, vehicle_id, node_ids)| CorpusRecord {
                instance_id,
                vehicle_id,
                node_ids,
            },
        ),
        0..8,
    )
}

pub fn corpus_round_trip(records: Vec<CorpusRecord>) -> Result<(), TestCaseError> {
    for r in &records {
        prop_assert_eq!(parse_record(&render_record(r)), Some(r.clone()));
    }
    let mut buf = Vec::new();
    write_corpus(&mut buf, &records).unwrap();
    prop_assert_eq!(read_corpus(&buf[..]).unwrap(), records);
    Ok(())
}
