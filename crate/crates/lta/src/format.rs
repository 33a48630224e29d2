//! On-disk formats: solution sets and value columns as CSV, direction sets as JSON.
//!
//! Floats are written in their shortest round-trip decimal form, so reading a file
//! back yields the exact same bits and rewriting it yields the same bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use lta_core::directions::Provenance;
use lta_core::{DirectionSet, SolutionSet};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<fs::File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new().has_headers(false).from_writer(file))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::validation(path, format!("{other:?}")),
    }
}

fn csv_rows(path: &Path, expected_header: &[String]) -> CliResult<Vec<Vec<f64>>> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != expected_header {
        return Err(CliError::validation(
            path,
            format!("expected header {:?}, found {:?}", expected_header.join(","), header.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| {
                    CliError::validation(path, format!("row {}: '{field}' is not a number", line + 1))
                })
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn objective_header(dim: usize) -> Vec<String> {
    (1..=dim).map(|j| format!("f{j}")).collect()
}

pub fn write_solution_csv(path: &Path, set: &SolutionSet) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(objective_header(set.dim())).map_err(|e| csv_error(path, e))?;
    for p in set.iter() {
        w.write_record(p.iter().map(|x| fmt_f64(*x))).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// Reads a solution set; the header fixes the dimension.
pub fn read_solution_csv(path: &Path) -> CliResult<SolutionSet> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(file);
    let dim = reader.headers().map_err(|e| csv_error(path, e))?.len();
    drop(reader);
    let rows = csv_rows(path, &objective_header(dim))?;
    if rows.is_empty() {
        return Err(CliError::validation(path, "no solutions"));
    }
    SolutionSet::new(rows).map_err(|e| CliError::validation(path, e.to_string()))
}

pub fn write_values_csv(path: &Path, column: &str, values: &[f64]) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record([column]).map_err(|e| csv_error(path, e))?;
    for v in values {
        w.write_record([fmt_f64(*v)]).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_values_csv(path: &Path, column: &str) -> CliResult<Vec<f64>> {
    Ok(csv_rows(path, &[column.to_string()])?.into_iter().map(|r| r[0]).collect())
}

pub fn write_q_history(path: &Path, history: &[(usize, f64)]) -> CliResult<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["iteration", "Q"]).map_err(|e| csv_error(path, e))?;
    for (it, q) in history {
        w.write_record([it.to_string(), fmt_f64(*q)]).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_q_history(path: &Path) -> CliResult<Vec<(usize, f64)>> {
    let rows = csv_rows(path, &["iteration".to_string(), "Q".to_string()])?;
    Ok(rows.into_iter().map(|r| (r[0] as usize, r[1])).collect())
}

/// JSON form of a direction set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionFile {
    pub m: usize,
    pub n: usize,
    pub generator: String,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, u64>,
    #[serde(default)]
    pub tool_version: Option<String>,
    pub vectors: Vec<Vec<f64>>,
}

impl DirectionFile {
    pub fn from_set(dirs: &DirectionSet) -> Self {
        let prov = dirs.provenance();
        DirectionFile {
            m: dirs.dim(),
            n: dirs.len(),
            generator: prov.generator.clone(),
            seed: prov.seed,
            params: prov.params.iter().cloned().collect(),
            tool_version: Some(TOOL_VERSION.to_string()),
            vectors: dirs.to_rows(),
        }
    }

    pub fn into_set(self, path: &Path) -> CliResult<DirectionSet> {
        if self.vectors.len() != self.n {
            return Err(CliError::validation(path, format!("n = {} but {} vectors", self.n, self.vectors.len())));
        }
        if self.vectors.iter().any(|v| v.len() != self.m) {
            return Err(CliError::validation(path, format!("every vector must have m = {} components", self.m)));
        }
        let mut prov = Provenance::new(&self.generator);
        prov.params = self.params.into_iter().collect();
        prov.seed = self.seed;
        DirectionSet::new(self.vectors, prov).map_err(|e| CliError::validation(path, e.to_string()))
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::validation(path, e.to_string()))
}

pub fn write_directions(path: &Path, dirs: &DirectionSet) -> CliResult<()> {
    write_json(path, &DirectionFile::from_set(dirs))
}

pub fn read_directions(path: &Path) -> CliResult<DirectionSet> {
    read_json::<DirectionFile>(path)?.into_set(path)
}

/// Parses `"1,1.5,2"` into coordinates.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect()
}
