//! Replay traces: observation streams stored one per line, grouped by cycle.
//!
//! Two on-disk forms are accepted: the tuple format (default, `.fsf`) and
//! JSONL (`.jsonl`). `#` starts a comment line; blank lines are skipped; times
//! must be non-decreasing.

use std::path::Path;

use thiserror::Error;

use crate::fsf::{fsf_from_json, fsf_to_json, parse_fsf, serialize_fsf, Fsf, FsfError};
use crate::ontology::Ontology;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: FsfError },
    #[error("line {line}: time {time} is lower than preceding time {previous}")]
    NonMonotoneTime {
        line: usize,
        time: u64,
        previous: u64,
    },
    #[error("failed to read trace: {0}")]
    Io(#[from] std::io::Error),
}

/// A cycle-indexed batch sequence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    /// Ascending by cycle; within-cycle order preserved from the source.
    batches: Vec<(u64, Vec<Fsf>)>,
}

impl Trace {
    /// Group observations arriving in non-decreasing time order.
    pub fn from_observations(
        observations: impl IntoIterator<Item = Fsf>,
    ) -> Result<Trace, TraceError> {
        let mut trace = Trace::default();
        for (index, fsf) in observations.into_iter().enumerate() {
            trace.push(fsf).map_err(|(time, previous)| {
                TraceError::NonMonotoneTime {
                    line: index + 1,
                    time,
                    previous,
                }
            })?;
        }
        Ok(trace)
    }

    fn push(&mut self, fsf: Fsf) -> Result<(), (u64, u64)> {
        match self.batches.last_mut() {
            Some((cycle, batch)) if *cycle == fsf.time => batch.push(fsf),
            Some((cycle, _)) if *cycle > fsf.time => return Err((fsf.time, *cycle)),
            _ => self.batches.push((fsf.time, vec![fsf])),
        }
        Ok(())
    }

    pub fn batches(&self) -> &[(u64, Vec<Fsf>)] {
        &self.batches
    }

    pub fn is_empty(&self) -> bool {
        self.batches.is_empty()
    }

    /// Highest cycle carrying observations.
    pub fn max_cycle(&self) -> Option<u64> {
        self.batches.last().map(|(cycle, _)| *cycle)
    }

    pub fn total_observations(&self) -> usize {
        self.batches.iter().map(|(_, batch)| batch.len()).sum()
    }

    /// Observations of one cycle (empty when the cycle is silent).
    pub fn observations_at(&self, cycle: u64) -> &[Fsf] {
        match self.batches.binary_search_by_key(&cycle, |(c, _)| *c) {
            Ok(idx) => &self.batches[idx].1,
            Err(_) => &[],
        }
    }

    /// Tuple-format rendering, one observation per line.
    pub fn to_fsf_text(&self) -> String {
        let mut out = String::new();
        for (_, batch) in &self.batches {
            for fsf in batch {
                out.push_str(&serialize_fsf(fsf));
                out.push('\n');
            }
        }
        out
    }

    /// JSONL rendering.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for (_, batch) in &self.batches {
            for fsf in batch {
                out.push_str(&fsf_to_json(fsf));
                out.push('\n');
            }
        }
        out
    }
}

/// Parse the tuple-format trace text.
pub fn parse_fsf_trace(text: &str, ontology: &Ontology) -> Result<Trace, TraceError> {
    parse_lines(text, |line| parse_fsf(line, ontology))
}

/// Parse the JSONL trace text.
pub fn parse_jsonl_trace(text: &str, ontology: &Ontology) -> Result<Trace, TraceError> {
    parse_lines(text, |line| fsf_from_json(line, ontology))
}

fn parse_lines(
    text: &str,
    parse: impl Fn(&str) -> Result<Fsf, FsfError>,
) -> Result<Trace, TraceError> {
    let mut trace = Trace::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fsf = parse(trimmed).map_err(|source| TraceError::Parse { line, source })?;
        trace
            .push(fsf)
            .map_err(|(time, previous)| TraceError::NonMonotoneTime {
                line,
                time,
                previous,
            })?;
    }
    Ok(trace)
}

/// Load a trace file, choosing the format from the extension (`.jsonl` is
/// JSONL, anything else the tuple format).
pub fn load_trace(path: &Path, ontology: &Ontology) -> Result<Trace, TraceError> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("jsonl") {
        parse_jsonl_trace(&text, ontology)
    } else {
        parse_fsf_trace(&text, ontology)
    }
}
