//! Generates a route corpus, writes it in the corpus format and schedules
//! every route.

use std::collections::BTreeMap;
use std::path::Path;

use ridesched::bench::reason_name;
use ridesched::ingest::{load_instance, read_corpus, write_corpus, Format};
use ridesched::routegen::{generate_records, GenConfig};
use ridesched::{schedule_route, PreprocessedRoute, Verdict};

pub fn main() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/syn-24.txt");
    let inst = load_instance(&path, Format::Darp)?;
    let cfg = GenConfig {
        seed: 42,
        routes_per_instance: 2000,
        ..GenConfig::default()
    };
    let records = generate_records(&inst, &cfg)?;

    let mut buf = Vec::new();
    write_corpus(&mut buf, &records)?;
    let first = String::from_utf8_lossy(&buf).lines().next().unwrap_or_default().to_string();
    println!("{} records, {} bytes; first: {first}", records.len(), buf.len());
    assert_eq!(read_corpus(&buf[..])?, records);

    let mut feasible = 0;
    let mut reasons: BTreeMap<&str, usize> = BTreeMap::new();
    for rec in &records {
        let route = inst.route_from_ids(&rec.node_ids)?;
        match schedule_route(&route, &PreprocessedRoute::new(&route)).verdict {
            Verdict::Feasible => feasible += 1,
            Verdict::Infeasible { reason, .. } => *reasons.entry(reason_name(reason)).or_default() += 1,
        }
    }
    println!("feasible {feasible}, infeasible {reasons:?}");
    Ok(())
}
