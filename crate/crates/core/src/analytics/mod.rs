//! Post-clustering reports: dataset coverage per leaf cluster, machine
//! partition plans, and their JSON, CSV and DOT renderings.

mod coverage;
mod plan;

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coverage::{
    coverage_report, predicate_dataset_tags, ClusterCoverage, CoverageReport, DatasetShare,
    DatasetSpread,
};
pub use plan::{first_fit_decreasing, partition_plan, Machine, PartitionPlan};

use crate::clustering::ClusterTree;
use crate::schema::dot_escape;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("predicate {0} has no dataset tag")]
    UntaggedPredicate(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Dot,
}

/// `clusters.json` document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClustersDocument {
    pub schema_version: u32,
    pub leaf_count: usize,
    pub clusters_per_level: Vec<usize>,
    pub tree: ClusterTree,
}

impl ClustersDocument {
    pub fn new(tree: ClusterTree) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            leaf_count: tree.leaves().len(),
            clusters_per_level: tree.clusters_per_level(),
            tree,
        }
    }
}

pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<(), AnalyticsError> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// `predicate,leaf,node_id,top_membership` per predicate, in row order.
pub fn write_clusters_csv<W: Write>(tree: &ClusterTree, out: W) -> Result<(), AnalyticsError> {
    let mut rows: Vec<(usize, usize, &str, f64)> = Vec::new();
    for (leaf_idx, leaf) in tree.leaves().into_iter().enumerate() {
        for (&m, &top) in leaf.members.iter().zip(&leaf.top_membership) {
            rows.push((m, leaf_idx, &leaf.id, top));
        }
    }
    rows.sort_by_key(|r| r.0);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["predicate", "leaf", "node_id", "top_membership"])?;
    for (m, leaf, id, top) in rows {
        w.write_record([
            tree.predicates[m].as_str(),
            &leaf.to_string(),
            id,
            &top.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per placed leaf: `machine,leaf,node_id,triple_load,over_capacity`.
pub fn write_plan_csv<W: Write>(
    plan: &PartitionPlan,
    tree: &ClusterTree,
    out: W,
) -> Result<(), AnalyticsError> {
    let leaves = tree.leaves();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["machine", "leaf", "node_id", "triple_load", "over_capacity"])?;
    for m in &plan.machines {
        for &leaf in &m.leaves {
            w.write_record([
                m.id.to_string(),
                leaf.to_string(),
                leaves[leaf].id.clone(),
                leaves[leaf].triple_load.to_string(),
                m.over_capacity.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `leaf,node_id,dataset,predicates,triples,fraction` per cluster/dataset.
pub fn write_coverage_csv<W: Write>(report: &CoverageReport, out: W) -> Result<(), AnalyticsError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["leaf", "node_id", "dataset", "predicates", "triples", "fraction"])?;
    for c in &report.clusters {
        for d in &c.datasets {
            w.write_record([
                c.leaf.to_string(),
                c.node_id.clone(),
                d.dataset.clone(),
                d.predicates.to_string(),
                d.triples.to_string(),
                d.fraction.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

const PALETTE: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

/// Leaf clusters as boxed subgraphs, predicates filled by dataset colour.
pub fn write_clusters_dot<W: Write>(
    tree: &ClusterTree,
    predicate_tags: &HashMap<String, String>,
    mut out: W,
) -> Result<(), AnalyticsError> {
    let datasets: BTreeSet<&str> = predicate_tags.values().map(String::as_str).collect();
    let colour = |tag: &str| {
        let idx = datasets.iter().position(|d| *d == tag).unwrap_or(0);
        PALETTE[idx % PALETTE.len()]
    };
    writeln!(out, "graph clusters {{")?;
    writeln!(out, "  node [shape=box, style=filled];")?;
    for (leaf_idx, leaf) in tree.leaves().into_iter().enumerate() {
        writeln!(out, "  subgraph cluster_{leaf_idx} {{")?;
        writeln!(
            out,
            "    label=\"leaf {leaf_idx} ({}) load {}\";",
            leaf.id, leaf.triple_load
        )?;
        writeln!(out, "    style=rounded;")?;
        for &m in &leaf.members {
            let iri = &tree.predicates[m];
            let tag = predicate_tags
                .get(iri)
                .ok_or_else(|| AnalyticsError::UntaggedPredicate(iri.clone()))?;
            writeln!(
                out,
                "    p{m} [label=\"{}\", fillcolor=\"{}\", tooltip=\"{}\"];",
                dot_escape(iri),
                colour(tag),
                dot_escape(tag)
            )?;
        }
        writeln!(out, "  }}")?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

/// Writes the requested report renderings into `dir` and returns the paths.
pub fn export_reports(
    dir: &Path,
    tree: &ClusterTree,
    report: &CoverageReport,
    plan: &PartitionPlan,
    predicate_tags: &HashMap<String, String>,
    formats: &[ReportFormat],
) -> Result<Vec<PathBuf>, AnalyticsError> {
    let mut written = Vec::new();
    let mut emit = |name: &str,
                    f: &dyn Fn(&mut BufWriter<File>) -> Result<(), AnalyticsError>|
     -> Result<(), AnalyticsError> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|source| AnalyticsError::Write {
            path: path.clone(),
            source,
        })?;
        let mut w = BufWriter::new(file);
        f(&mut w)?;
        w.flush()?;
        written.push(path);
        Ok(())
    };
    for format in formats {
        match format {
            ReportFormat::Json => {
                emit("coverage.json", &|w| write_json(report, w))?;
                emit("plan.json", &|w| write_json(plan, w))?;
            }
            ReportFormat::Csv => {
                emit("coverage.csv", &|w| write_coverage_csv(report, w))?;
                emit("plan.csv", &|w| write_plan_csv(plan, tree, w))?;
            }
            ReportFormat::Dot => {
                emit("clusters.dot", &|w| write_clusters_dot(tree, predicate_tags, w))?;
            }
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{hfcm, HfcmConfig};
    use crate::matrix::Matrix;
    use crate::similarity::SimilarityMatrix;

    fn fixture() -> (ClusterTree, HashMap<String, String>) {
        let labels: Vec<String> = (0..6).map(|i| format!("http://ex/p{i}")).collect();
        let mut m = Matrix::zeros(6, 6);
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = if i == j {
                    1.0
                } else if (i < 3) == (j < 3) {
                    0.7
                } else {
                    0.0
                };
            }
        }
        let cm = SimilarityMatrix::new(labels.clone(), m).unwrap();
        let loads = [10, 20, 30, 5, 5, 40];
        let config = HfcmConfig {
            capacity: 60,
            k_max: 3,
            ..Default::default()
        };
        let tree = hfcm(&cm, &loads, &config).unwrap();
        let tags = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), if i % 2 == 0 { "a" } else { "b" }.to_owned()))
            .collect();
        (tree, tags)
    }

    #[test]
    fn coverage_fractions_sum_to_one() {
        let (tree, tags) = fixture();
        let report = coverage_report(&tree, &tags).unwrap();
        assert_eq!(report.clusters.len(), 2);
        for c in &report.clusters {
            let sum: f64 = c.datasets.iter().map(|d| d.fraction).sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
        let preds: usize = report.spread.iter().map(|s| s.predicates).sum();
        assert_eq!(preds, 6);
    }

    #[test]
    fn single_dataset_covers_every_leaf() {
        let (tree, tags) = fixture();
        let tags = tags.into_keys().map(|k| (k, "only".to_owned())).collect();
        let report = coverage_report(&tree, &tags).unwrap();
        for c in &report.clusters {
            assert_eq!(c.datasets.len(), 1);
            assert_eq!(c.datasets[0].fraction, 1.0);
        }
        assert_eq!(report.spread[0].clusters, tree.leaves().len());
    }

    #[test]
    fn untagged_predicate_is_an_error() {
        let (tree, mut tags) = fixture();
        tags.remove("http://ex/p3");
        assert!(matches!(
            coverage_report(&tree, &tags),
            Err(AnalyticsError::UntaggedPredicate(_))
        ));
    }

    #[test]
    fn json_round_trip_is_byte_stable() {
        let (tree, tags) = fixture();
        let report = coverage_report(&tree, &tags).unwrap();
        let mut first = Vec::new();
        write_json(&report, &mut first).unwrap();
        let parsed: CoverageReport = serde_json::from_slice(&first).unwrap();
        let mut second = Vec::new();
        write_json(&parsed, &mut second).unwrap();
        assert_eq!(first, second);

        let doc = ClustersDocument::new(tree);
        let mut first = Vec::new();
        write_json(&doc, &mut first).unwrap();
        let parsed: ClustersDocument = serde_json::from_slice(&first).unwrap();
        assert_eq!(parsed, doc);
    }

    #[test]
    fn dot_and_csv_render() {
        let (tree, tags) = fixture();
        let mut dot = Vec::new();
        write_clusters_dot(&tree, &tags, &mut dot).unwrap();
        let dot = String::from_utf8(dot).unwrap();
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
        let mut csv_out = Vec::new();
        write_clusters_csv(&tree, &mut csv_out).unwrap();
        assert_eq!(String::from_utf8(csv_out).unwrap().lines().count(), 7);
    }
}
