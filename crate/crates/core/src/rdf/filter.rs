use std::collections::HashSet;

use serde::Serialize;

use super::corpus::{Corpus, Triple};
use super::term::TermId;

pub const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// IRI prefixes whose predicates are dropped before clustering. An entry
/// that is a full IRI matches that IRI (and anything it prefixes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocklist {
    prefixes: Vec<String>,
}

impl Default for Blocklist {
    /// The rdf:, rdfs: and owl: namespaces.
    fn default() -> Self {
        Self::new([RDF_NS, RDFS_NS, OWL_NS])
    }
}

impl Blocklist {
    pub fn new<I, S>(prefixes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            prefixes: prefixes.into_iter().map(Into::into).collect(),
        }
    }

    pub fn empty() -> Self {
        Self { prefixes: Vec::new() }
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }

    pub fn blocks(&self, iri: &str) -> bool {
        self.prefixes.iter().any(|p| iri.starts_with(p.as_str()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterSummary {
    pub predicates_before: usize,
    pub predicates_after: usize,
    pub removed_predicates: usize,
    pub triples_before: usize,
    pub triples_after: usize,
}

/// Drops every triple whose predicate IRI matches the blocklist.
pub fn filter_builtin_predicates(
    corpus: &Corpus,
    triples: &[Triple],
    blocklist: &Blocklist,
) -> (Vec<Triple>, FilterSummary) {
    let mut seen: HashSet<TermId> = HashSet::new();
    let mut blocked: HashSet<TermId> = HashSet::new();
    for t in triples {
        if seen.insert(t.predicate) {
            let iri = corpus.term(t.predicate).value();
            if blocklist.blocks(iri) {
                blocked.insert(t.predicate);
            }
        }
    }
    let kept: Vec<Triple> = triples
        .iter()
        .filter(|t| !blocked.contains(&t.predicate))
        .copied()
        .collect();
    let summary = FilterSummary {
        predicates_before: seen.len(),
        predicates_after: seen.len() - blocked.len(),
        removed_predicates: blocked.len(),
        triples_before: triples.len(),
        triples_after: kept.len(),
    };
    log::info!(
        "predicate filter: {} -> {} predicates ({} removed)",
        summary.predicates_before,
        summary.predicates_after,
        summary.removed_predicates
    );
    (kept, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(text: &str) -> Corpus {
        let mut c = Corpus::new();
        c.ingest_str(text, "t").unwrap();
        c
    }

    #[test]
    fn rdf_type_only_corpus_filters_to_nothing() {
        let c = corpus(&format!(
            "<http://a> <{RDF_TYPE}> <http://C> .\n<http://b> <{RDF_TYPE}> <http://C> .\n"
        ));
        let (kept, summary) = filter_builtin_predicates(&c, &c.triples, &Blocklist::default());
        assert!(kept.is_empty());
        assert_eq!(summary.predicates_after, 0);
        assert_eq!(summary.removed_predicates, 1);
    }

    #[test]
    fn empty_blocklist_is_identity() {
        let c = corpus(&format!(
            "<http://a> <{RDF_TYPE}> <http://C> .\n<http://a> <http://p> \"x\" .\n"
        ));
        let (kept, _) = filter_builtin_predicates(&c, &c.triples, &Blocklist::empty());
        assert_eq!(kept, c.triples);
    }

    #[test]
    fn ten_predicates_three_builtin() {
        // 7 domain predicates plus rdf:type, rdfs:label, rdfs:seeAlso.
        let mut text = String::new();
        for i in 0..7 {
            text.push_str(&format!("<http://s{i}> <http://ex.org/p{i}> <http://o{i}> .\n"));
            text.push_str(&format!("<http://s{i}> <http://ex.org/p{i}> \"v{i}\" .\n"));
        }
        text.push_str(&format!("<http://s0> <{RDF_TYPE}> <http://C> .\n"));
        text.push_str(&format!("<http://s0> <{RDFS_NS}label> \"zero\" .\n"));
        text.push_str(&format!("<http://s1> <{RDFS_NS}seeAlso> <http://s2> .\n"));
        let c = corpus(&text);
        let (kept, summary) = filter_builtin_predicates(&c, &c.triples, &Blocklist::default());
        assert_eq!(summary.predicates_before, 10);
        assert_eq!(summary.predicates_after, 7);
        assert_eq!(kept.len(), 14);
        let unique: HashSet<_> = kept.iter().map(|t| t.predicate).collect();
        assert_eq!(unique.len(), 7);
    }

    #[test]
    fn exact_iri_entry() {
        let c = corpus("<http://a> <http://ex.org/drop> <http://b> .\n<http://a> <http://ex.org/keep> <http://b> .\n");
        let (kept, _) =
            filter_builtin_predicates(&c, &c.triples, &Blocklist::new(["http://ex.org/drop"]));
        assert_eq!(kept.len(), 1);
        assert_eq!(c.term(kept[0].predicate).value(), "http://ex.org/keep");
    }
}
