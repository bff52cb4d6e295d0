use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::corpus::{Corpus, Triple};
use super::filter::RDF_TYPE;
use super::term::TermId;

/// Label used for nodes without an rdf:type assertion.
pub const UNTYPED: &str = "untyped";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub triple_count: usize,
    pub unique_predicates: usize,
    pub unique_entities: usize,
    pub unique_triple_schemas: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetCounts {
    pub dataset: String,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    #[serde(flatten)]
    pub total: Counts,
    pub datasets: Vec<DatasetCounts>,
}

#[derive(Default)]
struct Tally {
    triples: usize,
    predicates: HashSet<TermId>,
    entities: HashSet<TermId>,
    schemas: HashSet<(Option<TermId>, TermId, Option<TermId>)>,
}

impl Tally {
    fn add(&mut self, t: &Triple, schema: (Option<TermId>, TermId, Option<TermId>)) {
        self.triples += 1;
        self.predicates.insert(t.predicate);
        self.entities.insert(t.subject);
        self.entities.insert(t.object);
        self.schemas.insert(schema);
    }

    fn counts(&self) -> Counts {
        Counts {
            triple_count: self.triples,
            unique_predicates: self.predicates.len(),
            unique_entities: self.entities.len(),
            unique_triple_schemas: self.schemas.len(),
        }
    }
}

/// Exact distinct counts over the given triples, overall and per dataset.
///
/// A triple schema is the (subject class, predicate, object class)
/// signature, where a node's class is the object of its rdf:type triple
/// (the lexically smallest one when a node has several) or "untyped".
pub fn corpus_stats(corpus: &Corpus, triples: &[Triple]) -> CorpusStats {
    let rdf_type = corpus.interner.get(&super::term::Term::iri(RDF_TYPE));
    let mut class_of: HashMap<TermId, TermId> = HashMap::new();
    if let Some(rdf_type) = rdf_type {
        for t in triples.iter().filter(|t| t.predicate == rdf_type) {
            class_of
                .entry(t.subject)
                .and_modify(|c| {
                    if corpus.term(t.object).value() < corpus.term(*c).value() {
                        *c = t.object;
                    }
                })
                .or_insert(t.object);
        }
    }

    let mut total = Tally::default();
    let mut per_dataset: Vec<Tally> = corpus.datasets().iter().map(|_| Tally::default()).collect();
    for t in triples {
        let schema = (
            class_of.get(&t.subject).copied(),
            t.predicate,
            class_of.get(&t.object).copied(),
        );
        total.add(t, schema);
        per_dataset[t.dataset.0 as usize].add(t, schema);
    }
    CorpusStats {
        total: total.counts(),
        datasets: corpus
            .datasets()
            .iter()
            .zip(&per_dataset)
            .map(|(name, tally)| DatasetCounts {
                dataset: name.clone(),
                counts: tally.counts(),
            })
            .collect(),
    }
}

impl CorpusStats {
    /// Plain-text table with one row per dataset plus a total row.
    pub fn to_table(&self) -> String {
        let width = self
            .datasets
            .iter()
            .map(|d| d.dataset.len())
            .chain(["Dataset".len(), "Total".len()])
            .max()
            .unwrap_or(7);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>20}  {:>18}  {:>16}",
            "Dataset", "Triples#", "Unique triple schema", "Unique predicates", "Unique entities"
        );
        let mut row = |name: &str, c: &Counts| {
            let _ = writeln!(
                out,
                "{:<width$}  {:>12}  {:>20}  {:>18}  {:>16}",
                name, c.triple_count, c.unique_triple_schemas, c.unique_predicates, c.unique_entities
            );
        };
        for d in &self.datasets {
            row(&d.dataset, &d.counts);
        }
        row("Total", &self.total);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_has_zero_counts() {
        let corpus = Corpus::new();
        let stats = corpus_stats(&corpus, &corpus.triples);
        assert_eq!(stats.total, Counts::default());
        assert!(stats.datasets.is_empty());
    }

    #[test]
    fn one_predicate_five_triples() {
        let mut corpus = Corpus::new();
        let text: String = (0..5)
            .map(|i| format!("<http://s{i}> <http://p> <http://o{i}> .\n"))
            .collect();
        corpus.ingest_str(&text, "d").unwrap();
        let stats = corpus_stats(&corpus, &corpus.triples);
        assert_eq!(stats.total.triple_count, 5);
        assert_eq!(stats.total.unique_predicates, 1);
        assert_eq!(stats.total.unique_entities, 10);
        assert_eq!(stats.total.unique_triple_schemas, 1);
    }

    #[test]
    fn per_dataset_triples_sum_to_total() {
        let mut corpus = Corpus::new();
        corpus.ingest_str("<http://a> <http://p> <http://b> .\n", "x").unwrap();
        corpus
            .ingest_str("<http://a> <http://p> <http://b> .\n<http://a> <http://q> \"1\" .\n", "y")
            .unwrap();
        let stats = corpus_stats(&corpus, &corpus.triples);
        let sum: usize = stats.datasets.iter().map(|d| d.counts.triple_count).sum();
        assert_eq!(sum, stats.total.triple_count);
        assert_eq!(stats.total.unique_predicates, 2);
        assert!(stats.to_table().contains("Total"));
    }
}
