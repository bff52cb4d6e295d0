use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{AnalyticsError, SCHEMA_VERSION};
use crate::clustering::ClusterTree;
use crate::rdf::{Corpus, Triple};

/// Dataset tag per predicate IRI. A predicate seen in one source carries
/// that source's tag; one seen in several is tagged `shared:a+b` with the
/// tags in order of first occurrence.
pub fn predicate_dataset_tags(corpus: &Corpus, triples: &[Triple]) -> HashMap<String, String> {
    let mut seen: HashMap<_, Vec<_>> = HashMap::new();
    for t in triples {
        let tags = seen.entry(t.predicate).or_default();
        if !tags.contains(&t.dataset) {
            tags.push(t.dataset);
        }
    }
    seen.into_iter()
        .map(|(p, tags)| {
            let iri = corpus.term(p).value().to_owned();
            let tag = if tags.len() == 1 {
                corpus.dataset_name(tags[0]).to_owned()
            } else {
                let names: Vec<&str> = tags.iter().map(|&d| corpus.dataset_name(d)).collect();
                format!("shared:{}", names.join("+"))
            };
            (iri, tag)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetShare {
    pub dataset: String,
    pub predicates: usize,
    pub triples: u64,
    /// Share of the cluster's triple load.
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterCoverage {
    pub leaf: usize,
    pub node_id: String,
    pub triple_load: u64,
    pub datasets: Vec<DatasetShare>,
}

/// How widely a dataset is spread across leaf clusters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpread {
    pub dataset: String,
    pub clusters: usize,
    pub predicates: usize,
    pub triples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub schema_version: u32,
    pub clusters: Vec<ClusterCoverage>,
    pub spread: Vec<DatasetSpread>,
}

/// Per-leaf dataset composition plus per-dataset spread, ordered by leaf
/// and then dataset tag.
pub fn coverage_report(
    tree: &ClusterTree,
    predicate_tags: &HashMap<String, String>,
) -> Result<CoverageReport, AnalyticsError> {
    let mut clusters = Vec::new();
    let mut spread: BTreeMap<String, DatasetSpread> = BTreeMap::new();
    for (leaf_idx, leaf) in tree.leaves().into_iter().enumerate() {
        let mut tally: BTreeMap<&str, (usize, u64)> = BTreeMap::new();
        for &m in &leaf.members {
            let iri = &tree.predicates[m];
            let tag = predicate_tags
                .get(iri)
                .ok_or_else(|| AnalyticsError::UntaggedPredicate(iri.clone()))?;
            let load = tree.triple_loads[m];
            let entry = tally.entry(tag.as_str()).or_default();
            entry.0 += 1;
            entry.1 += load;
        }
        let datasets = tally
            .iter()
            .map(|(&dataset, &(predicates, triples))| DatasetShare {
                dataset: dataset.to_owned(),
                predicates,
                triples,
                fraction: if leaf.triple_load == 0 {
                    0.0
                } else {
                    triples as f64 / leaf.triple_load as f64
                },
            })
            .collect();
        for (&dataset, &(predicates, triples)) in &tally {
            let s = spread.entry(dataset.to_owned()).or_insert_with(|| DatasetSpread {
                dataset: dataset.to_owned(),
                clusters: 0,
                predicates: 0,
                triples: 0,
            });
            s.clusters += 1;
            s.predicates += predicates;
            s.triples += triples;
        }
        clusters.push(ClusterCoverage {
            leaf: leaf_idx,
            node_id: leaf.id.clone(),
            triple_load: leaf.triple_load,
            datasets,
        });
    }
    Ok(CoverageReport {
        schema_version: SCHEMA_VERSION,
        clusters,
        spread: spread.into_values().collect(),
    })
}
