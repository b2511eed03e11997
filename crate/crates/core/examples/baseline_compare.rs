//! The main scheduler against the eight-step forward-slack baseline, both
//! audited with the LP.

use std::path::Path;

use ridesched::bench::{audit_jobs, Algorithm, BenchOptions, BenchReport, Job};
use ridesched::ingest::{load_instance, Format};
use ridesched::routegen::{generate, GenConfig};

pub fn main() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/syn-24.txt");
    let inst = load_instance(&path, Format::Darp)?;
    let cfg = GenConfig {
        seed: 9,
        routes_per_instance: 3000,
        ..GenConfig::default()
    };
    let jobs: Vec<Job> = generate(&inst, &cfg)?
        .into_iter()
        .enumerate()
        .map(|(record, route)| Job {
            record,
            instance_id: inst.name.clone(),
            vehicle_id: 0,
            route,
            battery: None,
        })
        .collect();

    let algs = [Algorithm::Alg1, Algorithm::EightStep];
    let audits = audit_jobs(&jobs, &algs, BenchOptions { repeats: 1, parallel: true });
    let report = BenchReport::from_audits(&audits, &algs);
    println!("{:<11} {:>7} {:>10} {:>10} {:>8} {:>9} {:>10}", "alg", "routes", "infeasible", "incorrect", "deviate", "avg dev%", "median us");
    for s in &report.summaries {
        println!(
            "{:<11} {:>7} {:>10} {:>10} {:>8} {:>9.3} {:>10.1}",
            s.alg, s.n_routes, s.n_infeasible, s.n_incorrect_infeasible, s.n_deviating, s.avg_dev_pct, s.median_cpu_us
        );
    }
    Ok(())
}
