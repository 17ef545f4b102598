//! Per-genus batch runs persisted as JSON, one file per genus.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use bn_atlas_core::maximal::enumerate_expected_maximal;
use bn_atlas_core::noncontainment::{build_stratification_graph, consistency_check, StratificationGraph};
use bn_atlas_core::Int;

use crate::{ScanArgs, EXIT_OK};

#[derive(Debug)]
pub enum ScanError {
    Unwritable(PathBuf, String),
    BadRange(String),
    /// Files whose stored payload failed re-verification.
    Reverify(Vec<(PathBuf, String)>),
}

impl fmt::Display for ScanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanError::Unwritable(p, why) => write!(f, "output directory {} is not writable: {why}", p.display()),
            ScanError::BadRange(why) => write!(f, "bad genus range: {why}"),
            ScanError::Reverify(list) => {
                write!(f, "re-verification failed for")?;
                for (p, why) in list {
                    write!(f, "\n  {}: {why}", p.display())?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ScanError {}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusRecord {
    pub genus: Int,
    pub edge_counts: BTreeMap<String, usize>,
    pub graph: StratificationGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub genus: Int,
    pub nodes: usize,
    pub certificates: usize,
    pub edge_counts: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub genera: Vec<SummaryRow>,
    pub totals: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Computed,
    Verified,
}

pub fn genus_file(dir: &Path, g: Int) -> PathBuf {
    dir.join(format!("g-{g}.json"))
}

fn counts(graph: &StratificationGraph) -> BTreeMap<String, usize> {
    graph
        .label_counts()
        .into_iter()
        .map(|(k, v)| (k.tag().to_string(), v))
        .collect()
}

pub fn record_for(g: Int) -> Result<GenusRecord> {
    let graph = build_stratification_graph(g)?;
    Ok(GenusRecord {
        genus: g,
        edge_counts: counts(&graph),
        graph,
    })
}

/// Pretty JSON with a trailing newline; the byte-level persistence format.
pub fn encode<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Writes via a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

/// Checks a stored record without rebuilding the graph.
pub fn reverify(path: &Path, g: Int) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("unreadable: {e}"))?;
    let rec: GenusRecord = serde_json::from_str(&text).map_err(|e| format!("unparsable: {e}"))?;
    if rec.genus != g || rec.graph.genus != g {
        return Err(format!("genus field {} does not match file name", rec.genus));
    }
    let nodes = enumerate_expected_maximal(g).map_err(|e| e.to_string())?;
    if rec.graph.nodes != nodes {
        return Err("node list differs from the expected maximal loci".to_string());
    }
    if rec.edge_counts != counts(&rec.graph) {
        return Err("edge counts do not match the edge list".to_string());
    }
    let report = consistency_check(&rec.graph);
    if !report.passed {
        return Err(format!(
            "consistency check failed (certificates {:?}, contradictory pairs {})",
            report.failed_certificates,
            report.contradictory_pairs.len()
        ));
    }
    Ok(())
}

fn process(dir: &Path, g: Int) -> Result<Result<Action, String>> {
    let path = genus_file(dir, g);
    if path.exists() {
        return Ok(reverify(&path, g).map(|_| Action::Verified));
    }
    let rec = record_for(g)?;
    write_atomic(&path, &encode(&rec)?)?;
    Ok(Ok(Action::Computed))
}

fn genus_of(name: &str) -> Option<Int> {
    name.strip_prefix("g-")?.strip_suffix(".json")?.parse().ok()
}

/// Aggregates every `g-*.json` in the directory, ordered by genus.
pub fn build_summary(dir: &Path) -> Result<Summary> {
    let mut found = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        if let Some(g) = entry.file_name().to_str().and_then(genus_of) {
            found.push((g, entry.path()));
        }
    }
    found.sort();
    let mut genera = Vec::new();
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for (g, path) in found {
        let rec: GenusRecord = serde_json::from_str(&std::fs::read_to_string(&path)?)
            .with_context(|| format!("parsing {}", path.display()))?;
        for (k, v) in &rec.edge_counts {
            *totals.entry(k.clone()).or_default() += v;
        }
        genera.push(SummaryRow {
            genus: g,
            nodes: rec.graph.nodes.len(),
            certificates: rec.graph.certificates.len(),
            edge_counts: rec.edge_counts,
        });
    }
    Ok(Summary { genera, totals })
}

pub fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> Result<u8> {
    if a.from < 3 || a.to < a.from {
        return Err(ScanError::BadRange(format!("need 3 <= from <= to, got {}..={}", a.from, a.to)).into());
    }
    if a.jobs == 0 {
        return Err(ScanError::BadRange("--jobs must be at least 1".to_string()).into());
    }
    std::fs::create_dir_all(&a.out).map_err(|e| ScanError::Unwritable(a.out.clone(), e.to_string()))?;
    tempfile::NamedTempFile::new_in(&a.out).map_err(|e| ScanError::Unwritable(a.out.clone(), e.to_string()))?;

    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs).build()?;
    let genera: Vec<Int> = (a.from..=a.to).collect();
    let results: Vec<(Int, Result<Result<Action, String>>)> =
        pool.install(|| genera.par_iter().map(|&g| (g, process(&a.out, g))).collect());

    let mut failures = Vec::new();
    for (g, res) in results {
        match res? {
            Ok(Action::Computed) => writeln!(out, "g-{g}.json computed")?,
            Ok(Action::Verified) => writeln!(out, "g-{g}.json verified")?,
            Err(why) => failures.push((genus_file(&a.out, g), why)),
        }
    }
    if !failures.is_empty() {
        return Err(ScanError::Reverify(failures).into());
    }
    let summary = build_summary(&a.out)?;
    write_atomic(&a.out.join("summary.json"), &encode(&summary)?)?;
    writeln!(out, "summary.json: {} genera", summary.genera.len())?;
    Ok(EXIT_OK)
}
