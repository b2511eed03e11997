//! Charging decisions on station-bearing routes of an electric instance,
//! checked against the battery constraints and the battery-aware LP.

use std::path::Path;

use ridesched::battery::{check_battery_constraints, plan_charging, split_at_stations};
use ridesched::ingest::{load_instance, Format};
use ridesched::oracle::optimal_excess_with_battery;
use ridesched::routegen::{generate, GenConfig};
use ridesched::PreprocessedRoute;

pub fn main() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/esyn-24.txt");
    let mut inst = load_instance(&path, Format::Eadarp)?;
    // start half empty so that charging matters
    if let Some(b) = inst.battery.as_mut() {
        b.initial = 0.5 * b.capacity;
    }
    let params = inst.battery_params().expect("electric instance");
    let cfg = GenConfig {
        seed: 5,
        routes_per_instance: 400,
        station_density: 0.4,
        ..GenConfig::default()
    };

    let mut shown = 0;
    let (mut planned, mut feasible, mut agree) = (0, 0, 0);
    for route in generate(&inst, &cfg)?.into_iter().filter(|r| r.has_stations()) {
        let pre = PreprocessedRoute::new(&route);
        let plan = plan_charging(&route, &pre, &params);
        let oracle = optimal_excess_with_battery(&route, &params);
        planned += 1;
        if plan.verdict.is_feasible() {
            feasible += 1;
            assert!(check_battery_constraints(&route, &plan.schedule, &plan, &params).is_empty());
        }
        if plan.verdict.is_feasible() == oracle.objective().is_some() {
            agree += 1;
        }
        if plan.verdict.is_feasible() && shown < 2 {
            shown += 1;
            println!("route of {} nodes, {} segments", route.len(), split_at_stations(&route).len());
            for &(pos, e) in &plan.charges {
                println!("  charge {e:.2} at position {pos} (level {:.3} on arrival)", plan.levels[pos]);
            }
            println!(
                "  end level {:.3}, excess {:.3}, oracle {:.3}",
                plan.levels[route.len() - 1],
                plan.schedule.excess,
                oracle.objective().unwrap_or(f64::NAN)
            );
        }
    }
    println!("{planned} station routes, {feasible} feasible plans, verdict agrees with the LP on {agree}");
    Ok(())
}
