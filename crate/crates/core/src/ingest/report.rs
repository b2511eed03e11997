//! CSV report and per-route result files.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

pub const REPORT_HEADER: &str = "name,n_routes,size_min,size_max,alg,n_infeasible,n_deviating,avg_dev_pct,avg_cpu_ms";

/// One line of the summary table, per instance and algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    pub n_routes: usize,
    pub size_min: usize,
    pub size_max: usize,
    pub alg: String,
    pub n_infeasible: usize,
    pub n_deviating: usize,
    pub avg_dev_pct: f64,
    pub avg_cpu_ms: f64,
}

/// Outcome of one algorithm on one route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub record: usize,
    pub instance_id: String,
    pub vehicle_id: usize,
    pub size: usize,
    pub alg: String,
    pub feasible: bool,
    /// Empty when feasible.
    pub reason: String,
    pub node: Option<usize>,
    pub excess: Option<f64>,
    pub cpu_us: f64,
}

pub fn write_rows<W: Write, T: Serialize>(writer: W, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_report<R: Read>(reader: R) -> csv::Result<Vec<ReportRow>> {
    csv::Reader::from_reader(reader).deserialize().collect()
}
