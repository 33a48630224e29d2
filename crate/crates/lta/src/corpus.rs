//! Training corpora on disk: `manifest.json` plus `set_####.csv` and
//! `set_####.hvc.csv` per set.

use std::fs;
use std::path::Path;

use lta_core::trainer::{CorpusManifest, SetEntry};
use lta_core::{FrontShape, ReferencePoint, TrainingCorpus, TrainingSet};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::format::{read_json, read_solution_csv, read_values_csv, write_json, write_solution_csv, write_values_csv, TOOL_VERSION};

pub const MANIFEST: &str = "manifest.json";
pub const HVC_COLUMN: &str = "hvc";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub tool_version: String,
    pub m: usize,
    #[serde(rename = "L")]
    pub sets: usize,
    #[serde(rename = "N")]
    pub points: usize,
    pub seed: Option<u64>,
    pub reference: Vec<f64>,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub hvc_file: String,
    pub shape: String,
    pub p: f64,
    pub seed: u64,
}

/// How much of the cached contributions to recompute when loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verify {
    /// First, middle and last member of every set.
    Sample,
    All,
}

fn set_file(i: usize) -> String {
    format!("set_{i:04}.csv")
}

fn hvc_file(i: usize) -> String {
    format!("set_{i:04}.hvc.csv")
}

fn parse_shape(name: &str) -> Option<FrontShape> {
    [FrontShape::Triangular, FrontShape::Inverted].into_iter().find(|s| s.name() == name)
}

pub fn write_corpus(dir: &Path, corpus: &TrainingCorpus) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let manifest = corpus.manifest();
    let mut entries = Vec::with_capacity(corpus.len());
    for (i, (set, entry)) in corpus.sets().iter().zip(&manifest.entries).enumerate() {
        write_solution_csv(&dir.join(set_file(i)), set.solutions())?;
        write_values_csv(&dir.join(hvc_file(i)), HVC_COLUMN, set.contributions())?;
        entries.push(ManifestEntry {
            file: set_file(i),
            hvc_file: hvc_file(i),
            shape: entry.shape.name().to_string(),
            p: entry.p,
            seed: entry.seed,
        });
    }
    let file = ManifestFile {
        tool_version: TOOL_VERSION.to_string(),
        m: manifest.dim,
        sets: corpus.len(),
        points: manifest.points_per_set,
        seed: manifest.seed,
        reference: manifest.reference.clone(),
        entries,
    };
    write_json(&dir.join(MANIFEST), &file)
}

pub fn read_corpus(dir: &Path, verify: Verify) -> CliResult<TrainingCorpus> {
    let manifest_path = dir.join(MANIFEST);
    let manifest: ManifestFile = read_json(&manifest_path)?;
    if manifest.entries.len() != manifest.sets || manifest.sets == 0 {
        return Err(CliError::validation(&manifest_path, "L does not match the number of entries"));
    }
    let reference = ReferencePoint::new(manifest.reference.clone())
        .map_err(|e| CliError::validation(&manifest_path, e.to_string()))?;
    if reference.dim() != manifest.m {
        return Err(CliError::validation(&manifest_path, "reference point dimension differs from m"));
    }

    let mut sets = Vec::with_capacity(manifest.sets);
    let mut entries = Vec::with_capacity(manifest.sets);
    for entry in &manifest.entries {
        let shape = parse_shape(&entry.shape)
            .ok_or_else(|| CliError::validation(&manifest_path, format!("unknown shape '{}'", entry.shape)))?;
        let set_path = dir.join(&entry.file);
        let hvc_path = dir.join(&entry.hvc_file);
        let solutions = read_solution_csv(&set_path)?;
        if solutions.dim() != manifest.m || solutions.len() != manifest.points {
            return Err(CliError::validation(
                &set_path,
                format!("expected {} points of dimension {}", manifest.points, manifest.m),
            ));
        }
        let hvc = read_values_csv(&hvc_path, HVC_COLUMN)?;
        let set = TrainingSet::with_contributions(solutions, reference.clone(), hvc)
            .map_err(|e| CliError::validation(&hvc_path, e.to_string()))?;
        let n = set.len();
        let checked = match verify {
            Verify::Sample => set.verify_contributions([0, n / 2, n - 1]),
            Verify::All => set.verify_contributions(0..n),
        };
        checked.map_err(|e| CliError::validation(&hvc_path, e.to_string()))?;
        sets.push(set);
        entries.push(SetEntry { shape, p: entry.p, seed: entry.seed });
    }
    let core_manifest = CorpusManifest {
        dim: manifest.m,
        points_per_set: manifest.points,
        seed: manifest.seed,
        reference: manifest.reference,
        entries,
    };
    TrainingCorpus::new(sets, core_manifest).map_err(|e| CliError::validation(&manifest_path, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lta_core::trainer::generate_corpus;

    #[test]
    fn corpus_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = generate_corpus(3, 4, 10, 9).unwrap();
        write_corpus(dir.path(), &corpus).unwrap();
        let mut names: Vec<String> =
            fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
        names.sort();
        assert_eq!(names.len(), 9);
        assert_eq!(names[0], "manifest.json");
        assert_eq!(read_corpus(dir.path(), Verify::All).unwrap(), corpus);
    }

    #[test]
    fn tampered_cache_names_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = generate_corpus(2, 2, 6, 1).unwrap();
        write_corpus(dir.path(), &corpus).unwrap();
        let path = dir.path().join("set_0001.hvc.csv");
        let mut values = read_values_csv(&path, HVC_COLUMN).unwrap();
        values[0] *= 1.5;
        write_values_csv(&path, HVC_COLUMN, &values).unwrap();
        match read_corpus(dir.path(), Verify::Sample) {
            Err(CliError::Validation { path: p, .. }) => assert_eq!(p, path),
            other => panic!("unexpected {other:?}"),
        }
        fs::remove_file(&path).unwrap();
        assert!(read_corpus(dir.path(), Verify::Sample).is_err());
    }
}
