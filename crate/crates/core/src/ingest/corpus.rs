//! Route corpora: one route per line, `instance_id;vehicle_id;id,id,...`.

use std::io::{self, BufRead, Write};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CorpusRecord {
    pub instance_id: String,
    pub vehicle_id: usize,
    pub node_ids: Vec<usize>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    /// 1-based record number.
    #[error("malformed corpus record {0}")]
    MalformedRecord(usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn parse_record(line: &str) -> Option<CorpusRecord> {
    let mut parts = line.split(';');
    let instance_id = parts.next()?.to_string();
    let vehicle_id = parts.next()?.parse().ok()?;
    let ids = parts.next()?;
    if parts.next().is_some() || instance_id.is_empty() || instance_id.contains(',') {
        return None;
    }
    let node_ids = ids
        .split(',')
        .map(|t| t.parse().ok())
        .collect::<Option<Vec<usize>>>()?;
    Some(CorpusRecord {
        instance_id,
        vehicle_id,
        node_ids,
    })
}

pub fn render_record(rec: &CorpusRecord) -> String {
    let ids: Vec<String> = rec.node_ids.iter().map(|i| i.to_string()).collect();
    format!("{};{};{}", rec.instance_id, rec.vehicle_id, ids.join(","))
}

/// Reads every record; blank lines are skipped but still counted.
pub fn read_corpus<R: BufRead>(reader: R) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        out.push(parse_record(line).ok_or(CorpusError::MalformedRecord(i + 1))?);
    }
    Ok(out)
}

pub fn write_corpus<W: Write>(mut writer: W, records: &[CorpusRecord]) -> io::Result<()> {
    for r in records {
        writeln!(writer, "{}", render_record(r))?;
    }
    writer.flush()
}
