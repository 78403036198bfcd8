//! CSV/JSON emission for traces and summaries.
//!
//! The CSV trace schema is `run_id,seed,t,f_gap,grad_sq,queries,eta` with a
//! header row. Floats are written in Rust's shortest round-trip form, so
//! parsing an emitted file recovers the numeric trace exactly and identical
//! inputs produce byte-identical files.

use crate::error::{Error, Result};
use crate::optimizer::{RunTrace, TraceRecord};
use serde::Serialize;
use std::path::Path;

/// One run tagged for reporting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRun {
    pub run_id: String,
    pub seed: u64,
    pub trace: RunTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

pub const TRACE_CSV_HEADER: &str = "run_id,seed,t,f_gap,grad_sq,queries,eta";

pub fn traces_to_csv(runs: &[TraceRun]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for run in runs {
        for r in &run.trace.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                run.run_id, run.seed, r.t, r.f_gap, r.grad_sq, r.queries, r.eta
            ));
        }
    }
    out
}

/// Parses a trace CSV back into runs, grouped by `run_id` in file order.
/// Only the per-record fields are recoverable from the CSV; the parsed
/// traces carry an empty final point and a zero region-exit count.
pub fn parse_traces_csv(text: &str) -> Result<Vec<TraceRun>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == TRACE_CSV_HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "bad or missing CSV header: {other:?}"
            )))
        }
    }
    let mut runs: Vec<TraceRun> = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse(format!(
                "line {}: expected 7 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str, name: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: bad {name} '{s}'", lineno + 2)))
        };
        let run_id = fields[0].to_string();
        let seed: u64 = fields[1]
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad seed", lineno + 2)))?;
        let record = TraceRecord {
            t: fields[2]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad t", lineno + 2)))?,
            f_gap: parse_f(fields[3], "f_gap")?,
            grad_sq: parse_f(fields[4], "grad_sq")?,
            queries: fields[5]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad queries", lineno + 2)))?,
            eta: parse_f(fields[6], "eta")?,
        };
        match runs.last_mut() {
            Some(last) if last.run_id == run_id && last.seed == seed => {
                last.trace.records.push(record)
            }
            _ => runs.push(TraceRun {
                run_id,
                seed,
                trace: RunTrace {
                    records: vec![record],
                    final_point: Vec::new(),
                    region_exits: 0,
                },
            }),
        }
    }
    Ok(runs)
}

/// Writes either the trace CSV or a JSON rendering of the summary.
pub fn emit_report<S: Serialize>(
    runs: &[TraceRun],
    summary: &S,
    path: &Path,
    format: ReportFormat,
) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => traces_to_csv(runs),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(summary)
                .map_err(|e| Error::Parse(format!("serialize: {e}")))?;
            s.push('\n');
            s
        }
    };
    std::fs::write(path, text)?;
    Ok(())
}
