//! Experiment records, appended one JSON object per line.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub command: String,
    pub params: Value,
    pub seeds: Vec<u64>,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
    pub result: Value,
    pub version: String,
}

impl ExperimentRecord {
    pub fn append_to(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut line = serde_json::to_string(self).expect("records serialize");
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        // one write call per record keeps concurrent appends line-atomic
        f.write_all(line.as_bytes())?;
        Ok(())
    }
}

pub fn read_records(path: impl AsRef<Path>) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| crate::error::Error::Ingest {
                line: i + 1,
                source: Box::new(crate::error::Error::Io(e.to_string())),
            })
        })
        .collect()
}
