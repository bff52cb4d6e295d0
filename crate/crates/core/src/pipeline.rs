//! End-to-end orchestration: ingest → graph → similarity → cluster → report.
//!
//! Every run writes its outputs and a `manifest.json` into the configured
//! output directory. The similarity matrix and the cluster tree are cached
//! under the cache directory, keyed by content hashes of the filtered
//! triples and of the settings each stage depends on.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analytics::{
    self, coverage_report, partition_plan, predicate_dataset_tags, AnalyticsError, ClustersDocument,
    CoverageReport, PartitionPlan, ReportFormat,
};
use crate::clustering::{hfcm, hfcm_with, ClusterTree, ClusteringError, FeatureSource};
use crate::config::RunConfig;
use crate::matrix::Matrix;
use crate::rdf::{
    corpus_stats, filter_builtin_predicates, open_source, Corpus, CorpusStats, FilterSummary,
    IngestError, SourceReport, Triple,
};
use crate::schema::{
    build_incidence, neighbor_levels, project_predicates, write_projection_csv, IncidenceIndex,
};
use crate::similarity::{assemble_matrix, propagate_similarity, SimilarityError, SimilarityMatrix};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Ingest,
    Graph,
    Similarity,
    Cluster,
    Report,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Graph => "graph",
            Stage::Similarity => "similarity",
            Stage::Cluster => "cluster",
            Stage::Report => "report",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Clustering(#[from] ClusteringError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("ingest stage failed: no inputs")]
    NoInputs,
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: StageError,
    },
}

impl PipelineError {
    pub fn stage(&self) -> Option<Stage> {
        match self {
            PipelineError::NoInputs => Some(Stage::Ingest),
            PipelineError::Config(_) => None,
            PipelineError::Stage { stage, .. } => Some(*stage),
        }
    }
}

fn at<E: Into<StageError>>(stage: Stage) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError::Stage {
        stage,
        source: e.into(),
    }
}

fn io_at(stage: Stage, path: &Path) -> impl FnOnce(io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Stage {
        stage,
        source: StageError::Io {
            path: path.to_owned(),
            source,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub path: PathBuf,
    pub dataset: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Computed,
    Cached,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub status: StageStatus,
    pub millis: u128,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub inputs: Vec<InputRecord>,
    pub config: RunConfig,
    pub config_sha256: String,
    pub triples_sha256: Option<String>,
    pub stages: Vec<StageRecord>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn status(&self, stage: Stage) -> Option<&StageStatus> {
        self.stages.iter().find(|s| s.stage == stage).map(|s| &s.status)
    }
}

/// Parsed and filtered corpus.
pub struct Ingested {
    pub corpus: Corpus,
    pub filtered: Vec<Triple>,
    pub stats: CorpusStats,
    pub filter: FilterSummary,
    pub sources: Vec<SourceReport>,
    pub inputs: Vec<InputRecord>,
}

/// Parses every configured input (files in parallel, merged in input
/// order), computes statistics and drops blocklisted predicates.
pub fn ingest(config: &RunConfig) -> Result<Ingested, PipelineError> {
    let inputs = &config.ingest.inputs;
    if inputs.is_empty() {
        return Err(PipelineError::NoInputs);
    }
    let policy = config.ingest.malformed_policy;
    let parsed: Vec<(Corpus, SourceReport, InputRecord)> = inputs
        .par_iter()
        .map(|input| {
            let tag = input.dataset_tag();
            let record = hash_file(&input.path, &tag).map_err(io_at(Stage::Ingest, &input.path))?;
            let source = open_source(&input.path).map_err(io_at(Stage::Ingest, &input.path))?;
            let mut corpus = Corpus::new();
            let report = corpus.ingest(source, &tag, policy).map_err(at(Stage::Ingest))?;
            Ok((corpus, report, record))
        })
        .collect::<Result<_, PipelineError>>()?;

    let mut corpus = Corpus::new();
    let mut sources = Vec::new();
    let mut records = Vec::new();
    for (part, report, record) in parsed {
        corpus.merge(part).map_err(at(Stage::Ingest))?;
        sources.push(report);
        records.push(record);
    }
    let stats = corpus_stats(&corpus, &corpus.triples);
    let (filtered, filter) =
        filter_builtin_predicates(&corpus, &corpus.triples, &config.ingest.blocklist());
    Ok(Ingested {
        corpus,
        filtered,
        stats,
        filter,
        sources,
        inputs: records,
    })
}

fn hash_file(path: &Path, dataset: &str) -> io::Result<InputRecord> {
    let mut hasher = Sha256::new();
    let bytes = io::copy(&mut File::open(path)?, &mut hasher)?;
    Ok(InputRecord {
        path: path.to_owned(),
        dataset: dataset.to_owned(),
        bytes,
        sha256: hex::encode(hasher.finalize()),
    })
}

/// Content hash of a triple list, independent of term ids.
pub fn triples_hash(corpus: &Corpus, triples: &[Triple]) -> String {
    let mut hasher = Sha256::new();
    for t in triples {
        let line = format!(
            "{} {} {} .\n",
            corpus.term(t.subject),
            corpus.term(t.predicate),
            corpus.term(t.object)
        );
        hasher.update(line.as_bytes());
    }
    hex::encode(hasher.finalize())
}

fn sha256_of(parts: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update((p.len() as u64).to_le_bytes());
        hasher.update(p);
    }
    hex::encode(hasher.finalize())
}

/// Similarity matrix of an incidence index at the given level cap.
pub fn similarity_matrix(index: &IncidenceIndex, lmax: u32) -> Result<SimilarityMatrix, SimilarityError> {
    let projection = project_predicates(index);
    let levels = neighbor_levels(&projection, lmax);
    assemble_matrix(&propagate_similarity(&levels, index), index.labels())
}

/// Feature source that rebuilds the similarity matrix from the member
/// predicates' own incidence at every node.
pub struct RecomputedFeatures<'a> {
    pub index: &'a IncidenceIndex,
    pub lmax: u32,
}

impl FeatureSource for RecomputedFeatures<'_> {
    fn features(&self, members: &[usize]) -> Result<Matrix, ClusteringError> {
        let sub = self.index.restrict(members);
        similarity_matrix(&sub, self.lmax)
            .map(|m| m.values().clone())
            .map_err(|e| ClusteringError::Features(e.to_string()))
    }
}

/// Which stages a run executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Stats,
    Graph,
    Similarity,
    Cluster,
    Report,
}

/// Everything a run produced. Later-stage fields are `None` when the run
/// stopped earlier.
pub struct RunOutcome {
    pub ingested: Ingested,
    pub index: Option<IncidenceIndex>,
    pub cm: Option<SimilarityMatrix>,
    pub tree: Option<ClusterTree>,
    pub coverage: Option<CoverageReport>,
    pub plan: Option<PartitionPlan>,
    pub manifest: RunManifest,
}

struct Recorder {
    stages: Vec<StageRecord>,
    outputs: Vec<String>,
}

impl Recorder {
    fn record(&mut self, stage: Stage, status: StageStatus, started: Instant) {
        log::info!("{stage}: {status:?} in {:?}", started.elapsed());
        self.stages.push(StageRecord {
            stage,
            status,
            millis: started.elapsed().as_millis(),
        });
    }
}

fn write_file<F>(dir: &Path, name: &str, stage: Stage, rec: &mut Recorder, f: F) -> Result<(), PipelineError>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<(), StageError>,
{
    let path = dir.join(name);
    let file = File::create(&path).map_err(io_at(stage, &path))?;
    let mut w = BufWriter::new(file);
    f(&mut w).map_err(at(stage))?;
    w.flush().map_err(io_at(stage, &path))?;
    rec.outputs.push(name.to_owned());
    Ok(())
}

/// Runs the pipeline up to `target`, writing outputs and the manifest.
pub fn run(config: &RunConfig, target: Target) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let out_dir = &config.run.output_dir;
    fs::create_dir_all(out_dir).map_err(io_at(Stage::Ingest, out_dir))?;
    let cache_dir = &config.run.cache_dir;
    let mut rec = Recorder {
        stages: Vec::new(),
        outputs: Vec::new(),
    };

    let started = Instant::now();
    let ingested = ingest(config)?;
    write_file(out_dir, "stats.json", Stage::Ingest, &mut rec, |w| {
        Ok(analytics::write_json(&ingested.stats, w)?)
    })?;
    rec.record(Stage::Ingest, StageStatus::Computed, started);

    let mut outcome = RunOutcome {
        index: None,
        cm: None,
        tree: None,
        coverage: None,
        plan: None,
        manifest: RunManifest {
            schema_version: MANIFEST_VERSION,
            inputs: ingested.inputs.clone(),
            config: config.clone(),
            config_sha256: config_hash(config),
            triples_sha256: None,
            stages: Vec::new(),
            outputs: Vec::new(),
        },
        ingested,
    };

    if target != Target::Stats {
        let triples_sha = triples_hash(&outcome.ingested.corpus, &outcome.ingested.filtered);
        outcome.manifest.triples_sha256 = Some(triples_sha.clone());
        let lmax = config.graph.lmax;
        let cm_key = sha256_of(&[b"cm-v1", triples_sha.as_bytes(), &lmax.to_le_bytes()]);
        let index = build_incidence(&outcome.ingested.corpus, &outcome.ingested.filtered);

        // Graph stage: projection + levels, cached as the projection CSV.
        let started = Instant::now();
        let projection_cache = cache_dir.join(format!("projection-{cm_key}.csv"));
        let cm_cache = cache_dir.join(format!("cm-{cm_key}.bin"));
        let mut cached_cm = None;
        if projection_cache.is_file() && cm_cache.is_file() {
            match File::open(&cm_cache)
                .map_err(SimilarityError::from)
                .and_then(|f| SimilarityMatrix::read_binary(io::BufReader::new(f), index.labels().to_vec()))
            {
                Ok(cm) => cached_cm = Some(cm),
                Err(e) => log::warn!("ignoring unusable cache {}: {e}", cm_cache.display()),
            }
        }

        let (cm, graph_status) = if let Some(cm) = cached_cm {
            fs::copy(&projection_cache, out_dir.join("projection.csv"))
                .map_err(io_at(Stage::Graph, &projection_cache))?;
            rec.outputs.push("projection.csv".into());
            rec.record(Stage::Graph, StageStatus::Cached, started);
            (Some(cm), StageStatus::Cached)
        } else {
            let projection = project_predicates(&index);
            let levels = neighbor_levels(&projection, lmax);
            write_file(out_dir, "projection.csv", Stage::Graph, &mut rec, |w| {
                write_projection_csv(&index, &projection, &levels, w).map_err(|source| StageError::Io {
                    path: PathBuf::from("projection.csv"),
                    source,
                })
            })?;
            store_cache(cache_dir, &out_dir.join("projection.csv"), &projection_cache);
            rec.record(Stage::Graph, StageStatus::Computed, started);
            if target == Target::Graph {
                (None, StageStatus::Computed)
            } else {
                let started = Instant::now();
                let scores = propagate_similarity(&levels, &index);
                let cm = assemble_matrix(&scores, index.labels()).map_err(at(Stage::Similarity))?;
                let _ = fs::create_dir_all(cache_dir);
                match File::create(&cm_cache).and_then(|f| cm.write_binary(BufWriter::new(f))) {
                    Ok(()) => {}
                    Err(e) => log::warn!("cannot write cache {}: {e}", cm_cache.display()),
                }
                rec.stages.push(StageRecord {
                    stage: Stage::Similarity,
                    status: StageStatus::Computed,
                    millis: started.elapsed().as_millis(),
                });
                (Some(cm), StageStatus::Computed)
            }
        };

        if let Some(cm) = &cm {
            let started = Instant::now();
            write_file(out_dir, "cm.csv", Stage::Similarity, &mut rec, |w| Ok(cm.write_csv(w)?))?;
            write_file(out_dir, "cm.bin", Stage::Similarity, &mut rec, |w| {
                cm.write_binary(w).map_err(|source| StageError::Io {
                    path: PathBuf::from("cm.bin"),
                    source,
                })
            })?;
            if graph_status == StageStatus::Cached {
                rec.record(Stage::Similarity, StageStatus::Cached, started);
            }
        }

        if let (Some(cm), true) = (&cm, matches!(target, Target::Cluster | Target::Report)) {
            let started = Instant::now();
            let loads = index.triple_counts().to_vec();
            let cluster_key = sha256_of(&[
                b"clusters-v1",
                cm_key.as_bytes(),
                serde_json::to_string(&config.clustering).unwrap_or_default().as_bytes(),
                &loads.iter().flat_map(|l| l.to_le_bytes()).collect::<Vec<u8>>(),
            ]);
            let cluster_cache = cache_dir.join(format!("clusters-{cluster_key}.json"));
            let cached: Option<ClustersDocument> = fs::read(&cluster_cache)
                .ok()
                .and_then(|bytes| match serde_json::from_slice::<ClustersDocument>(&bytes) {
                    Ok(doc) if doc.tree.predicates == cm.labels() => Some(doc),
                    Ok(_) => {
                        log::warn!("ignoring mismatched cache {}", cluster_cache.display());
                        None
                    }
                    Err(e) => {
                        log::warn!("ignoring unusable cache {}: {e}", cluster_cache.display());
                        None
                    }
                });
            let (doc, status) = match cached {
                Some(doc) => (doc, StageStatus::Cached),
                None => {
                    let hconf = config.clustering.hfcm();
                    let tree = if config.clustering.recompute_per_node {
                        let source = RecomputedFeatures { index: &index, lmax };
                        hfcm_with(&source, cm.labels(), &loads, &hconf)
                    } else {
                        hfcm(cm, &loads, &hconf)
                    }
                    .map_err(at(Stage::Cluster))?;
                    let doc = ClustersDocument::new(tree);
                    let _ = fs::create_dir_all(cache_dir);
                    if let Ok(f) = File::create(&cluster_cache) {
                        if let Err(e) = analytics::write_json(&doc, BufWriter::new(f)) {
                            log::warn!("cannot write cache {}: {e}", cluster_cache.display());
                        }
                    }
                    (doc, StageStatus::Computed)
                }
            };
            write_file(out_dir, "clusters.json", Stage::Cluster, &mut rec, |w| {
                Ok(analytics::write_json(&doc, w)?)
            })?;
            write_file(out_dir, "clusters.csv", Stage::Cluster, &mut rec, |w| {
                Ok(analytics::write_clusters_csv(&doc.tree, w)?)
            })?;
            rec.record(Stage::Cluster, status, started);
            outcome.tree = Some(doc.tree);
        }

        if let (Some(tree), Target::Report) = (&outcome.tree, target) {
            let started = Instant::now();
            let tags: HashMap<String, String> =
                predicate_dataset_tags(&outcome.ingested.corpus, &outcome.ingested.filtered);
            let coverage = coverage_report(tree, &tags).map_err(at(Stage::Report))?;
            let plan = partition_plan(tree, config.clustering.capacity);
            let written = analytics::export_reports(
                out_dir,
                tree,
                &coverage,
                &plan,
                &tags,
                &[ReportFormat::Json, ReportFormat::Csv, ReportFormat::Dot],
            )
            .map_err(at(Stage::Report))?;
            rec.outputs.extend(
                written
                    .iter()
                    .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned())),
            );
            rec.record(Stage::Report, StageStatus::Computed, started);
            outcome.coverage = Some(coverage);
            outcome.plan = Some(plan);
        }

        outcome.index = Some(index);
        outcome.cm = cm;
    }

    rec.outputs.push("manifest.json".into());
    outcome.manifest.stages = rec.stages;
    outcome.manifest.outputs = rec.outputs;
    let manifest_path = out_dir.join("manifest.json");
    let file = File::create(&manifest_path).map_err(io_at(Stage::Report, &manifest_path))?;
    analytics::write_json(&outcome.manifest, BufWriter::new(file)).map_err(at(Stage::Report))?;
    Ok(outcome)
}

fn store_cache(cache_dir: &Path, from: &Path, to: &Path) {
    if let Err(e) = fs::create_dir_all(cache_dir).and_then(|_| fs::copy(from, to)) {
        log::warn!("cannot write cache {}: {e}", to.display());
    }
}

/// Hash of the configuration values, used to detect config changes.
pub fn config_hash(config: &RunConfig) -> String {
    sha256_of(&[serde_json::to_string(config).unwrap_or_default().as_bytes()])
}

/// Silhouette and objective per candidate `k` for every split node.
pub fn format_k_diagnostics(tree: &ClusterTree) -> String {
    let mut out = String::new();
    for node in tree.nodes() {
        if node.diagnostics.is_empty() {
            continue;
        }
        let _ = writeln!(
            out,
            "node {} ({} predicates, load {}): chose k = {}",
            node.id,
            node.members.len(),
            node.triple_load,
            node.chosen_k.unwrap_or(0)
        );
        let _ = writeln!(out, "  {:>3}  {:>10}  {:>14}  {:>5}", "k", "silhouette", "objective", "iters");
        for d in &node.diagnostics {
            let sil = d.silhouette.map_or("-".to_owned(), |s| format!("{s:.4}"));
            let _ = writeln!(
                out,
                "  {:>3}  {:>10}  {:>14.6}  {:>5}",
                d.k, sil, d.objective, d.iterations
            );
        }
    }
    out
}

/// Cluster count after each splitting level.
pub fn format_level_counts(tree: &ClusterTree) -> String {
    tree.clusters_per_level()
        .iter()
        .enumerate()
        .map(|(i, c)| format!("level {}: {c} clusters\n", i + 1))
        .collect()
}
