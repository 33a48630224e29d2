//! Serialized results of the evaluation commands.

use std::collections::BTreeMap;
use std::path::Path;

use lta_core::eval::RankTable;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::fmt_f64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionInfo {
    pub source: String,
    pub generator: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirConfig {
    pub m: usize,
    #[serde(rename = "M")]
    pub sets_per_front: usize,
    #[serde(rename = "N")]
    pub points: usize,
    pub seed: u64,
    pub fronts: Vec<String>,
    pub self_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontResult {
    pub front: String,
    pub rate: f64,
    pub correct: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirRun {
    pub directions: Option<DirectionInfo>,
    pub fronts: Vec<FrontResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirMethod {
    pub name: String,
    pub runs: Vec<CirRun>,
    /// Mean CIR over runs, one entry per front.
    pub mean: Vec<f64>,
    pub ranks: Vec<f64>,
    pub average_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSumEntry {
    pub front: String,
    pub method: String,
    pub versus: String,
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirReportFile {
    pub tool_version: String,
    pub config: CirConfig,
    pub methods: Vec<CirMethod>,
    pub rank_sum: Vec<RankSumEntry>,
}

impl CirReportFile {
    /// Long-format summary: one row per (method, front).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,front,runs,mean_cir,rank\n");
        for m in &self.methods {
            for (f, front) in self.config.fronts.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    m.name,
                    front,
                    m.runs.len(),
                    fmt_f64(m.mean[f]),
                    fmt_f64(m.ranks[f])
                ));
            }
        }
        out
    }
}

/// Per-front ranks and average ranks of the methods, higher mean CIR first.
pub fn attach_ranks(methods: &mut [CirMethod], table: &RankTable) {
    for (m, (ranks, avg)) in methods.iter_mut().zip(table.ranks.iter().zip(&table.average)) {
        m.ranks = ranks.clone();
        m.average_rank = *avg;
    }
}

/// Reads the `(method, front, mean_cir)` triples of a CIR summary CSV.
pub fn read_cir_csv(path: &Path) -> CliResult<Vec<(String, String, f64)>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::Reader::from_reader(file);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::validation(path, e.to_string()))?;
        if record.len() != 5 {
            return Err(CliError::validation(path, "expected method,front,runs,mean_cir,rank"));
        }
        let value = record[3]
            .parse::<f64>()
            .map_err(|_| CliError::validation(path, format!("'{}' is not a number", &record[3])))?;
        rows.push((record[0].to_string(), record[1].to_string(), value));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateInfo {
    pub source: String,
    pub size: usize,
    pub front: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GahssConfig {
    pub k: usize,
    pub reference: Vec<f64>,
    pub reference_factor: Option<f64>,
    pub candidates: CandidateInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GahssReportFile {
    pub tool_version: String,
    pub config: GahssConfig,
    pub directions: DirectionInfo,
    pub selected: Vec<usize>,
    pub hypervolume: f64,
}
