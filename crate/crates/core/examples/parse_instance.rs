//! Loads the bundled instance files and turns a node-id list into a route.

use std::path::Path;

use ridesched::ingest::{derive_dropoff_windows, load_instance, Format};
use ridesched::{schedule_route, PreprocessedRoute};

pub fn main() -> anyhow::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");

    let worked = load_instance(&data.join("worked.txt"), Format::Darp)?;
    println!(
        "{}: {} requests, capacity {}, max ride {}",
        worked.name, worked.requests, worked.capacity, worked.max_ride
    );
    let route = worked.route_from_ids(&[0, 1, 2, 3, 4, 5])?;
    let s = schedule_route(&route, &PreprocessedRoute::new(&route));
    println!("  route 0-1-2-3-4-5: {:?}, excess {}", s.verdict, s.excess);

    let syn = load_instance(&data.join("syn-24.txt"), Format::Darp)?;
    let derived = derive_dropoff_windows(&syn);
    let p = 1;
    let d = syn.dropoff_of(p);
    let (a, b) = (&syn.nodes[d], &derived.nodes[d]);
    println!(
        "{}: dropoff {} window [{}, {}] -> [{:.2}, {:.2}] after derivation",
        syn.name, d, a.open, a.close, b.open, b.close
    );

    let e = load_instance(&data.join("esyn-24.txt"), Format::Eadarp)?;
    let params = e.battery_params().expect("electric instance");
    println!(
        "{}: {} stations, Q = {}, end level {:.3}",
        e.name,
        e.stations().len(),
        params.capacity,
        params.end_level()
    );
    Ok(())
}
