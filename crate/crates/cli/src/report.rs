//! Machine-readable run reports. Field order is fixed by the struct layout,
//! so identical runs serialize to identical bytes.

use serde::Serialize;

use qsal::sal::{BitRecord, SalOutcome, SalStatus};
use qsal::{Architecture, OracleHit};

#[derive(Debug, Serialize)]
pub struct RunConfig {
    pub theta: usize,
    pub seed: u64,
    pub l_order: String,
    pub qubit_cap: usize,
}

#[derive(Debug, Serialize)]
pub struct RunOutcome {
    pub status: &'static str,
    pub arch_index: Option<usize>,
    pub arch_name: Option<String>,
    pub selectors: Option<String>,
    pub selectors_grouped: Option<String>,
    pub verified_performance: usize,
}

#[derive(Debug, Serialize)]
pub struct Counters {
    pub searched_bits: usize,
    pub pattern_presentations: usize,
    pub nonlinear_calls: usize,
    pub peak_entry_count: usize,
}

#[derive(Debug, Serialize)]
pub struct TraceRecord {
    pub k: usize,
    pub initial_entries: usize,
    pub tried: Vec<TriedValue>,
    pub chosen: Option<u8>,
    pub measurement: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct TriedValue {
    pub l: u8,
    pub flag: u8,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub config: RunConfig,
    pub outcome: RunOutcome,
    pub counters: Counters,
    pub trace: Vec<TraceRecord>,
}

impl RunReport {
    pub fn new(command: Vec<String>, config: RunConfig, outcome: &SalOutcome, archs: &[Architecture]) -> Self {
        let arch = outcome.arch_index.and_then(|i| archs.get(i));
        Self {
            command,
            config,
            outcome: RunOutcome {
                status: status_name(outcome.status),
                arch_index: outcome.arch_index,
                arch_name: arch.map(|a| a.name().to_string()),
                selectors: outcome.selectors.as_ref().map(|s| s.to_string()),
                selectors_grouped: outcome.selectors.as_ref().zip(arch).map(|(s, a)| s.grouped(a)),
                verified_performance: outcome.verified_performance,
            },
            counters: Counters {
                searched_bits: outcome.trace.searched_bits,
                pattern_presentations: outcome.trace.presentations,
                nonlinear_calls: outcome.trace.nonlinear_calls,
                peak_entry_count: outcome.trace.peak_entries,
            },
            trace: outcome.trace.records.iter().map(trace_record).collect(),
        }
    }
}

fn trace_record(r: &BitRecord) -> TraceRecord {
    TraceRecord {
        k: r.k,
        initial_entries: r.initial_entries,
        tried: r
            .tried
            .iter()
            .map(|&(l, f)| TriedValue {
                l: l as u8,
                flag: f as u8,
            })
            .collect(),
        chosen: r.chosen.map(|b| b as u8),
        measurement: r.measurement.clone(),
    }
}

pub fn status_name(status: SalStatus) -> &'static str {
    match status {
        SalStatus::Found => "found",
        SalStatus::NoSolution => "no_solution",
    }
}

#[derive(Debug, Serialize)]
pub struct OracleRow {
    pub arch_index: usize,
    pub arch_name: String,
    pub selectors: String,
    pub selectors_grouped: String,
    pub performance: usize,
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub command: Vec<String>,
    pub theta: usize,
    pub count: usize,
    pub hits: Vec<OracleRow>,
}

impl OracleReport {
    pub fn new(command: Vec<String>, theta: usize, hits: &[OracleHit], archs: &[Architecture]) -> Self {
        Self {
            command,
            theta,
            count: hits.len(),
            hits: hits
                .iter()
                .map(|h| OracleRow {
                    arch_index: h.arch_index,
                    arch_name: archs[h.arch_index].name().to_string(),
                    selectors: h.selectors.to_string(),
                    selectors_grouped: h.selectors.grouped(&archs[h.arch_index]),
                    performance: h.performance,
                })
                .collect(),
        }
    }
}
