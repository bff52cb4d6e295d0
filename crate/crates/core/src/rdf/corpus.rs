use std::io::BufRead;

use serde::Serialize;

use super::ntriples::{MalformedPolicy, ParseError, StatementReader};
use super::term::{Interner, Term, TermId};

/// Index of a dataset tag inside a [`Corpus`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DatasetId(pub u16);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub subject: TermId,
    pub predicate: TermId,
    pub object: TermId,
    pub dataset: DatasetId,
}

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("dataset {0:?}: {1}")]
    Parse(String, #[source] ParseError),
    #[error("dataset tag must be non-empty")]
    EmptyTag,
    #[error("dataset tag {0:?} used by more than one source")]
    DuplicateTag(String),
    #[error("too many datasets")]
    TooManyDatasets,
}

/// Per-source ingestion summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SourceReport {
    pub dataset: String,
    pub lines: usize,
    pub triples: usize,
    pub malformed: usize,
}

/// All triples read so far, with a shared interner and dataset tags.
#[derive(Debug, Default, Clone)]
pub struct Corpus {
    pub interner: Interner,
    pub triples: Vec<Triple>,
    datasets: Vec<String>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn datasets(&self) -> &[String] {
        &self.datasets
    }

    pub fn dataset_name(&self, id: DatasetId) -> &str {
        &self.datasets[id.0 as usize]
    }

    pub fn term(&self, id: TermId) -> &Term {
        self.interner.resolve(id)
    }

    /// Registers a new dataset tag. Tags must be unique per source.
    pub fn add_dataset(&mut self, tag: &str) -> Result<DatasetId, IngestError> {
        if tag.is_empty() {
            return Err(IngestError::EmptyTag);
        }
        if self.datasets.iter().any(|d| d == tag) {
            return Err(IngestError::DuplicateTag(tag.to_owned()));
        }
        let id = u16::try_from(self.datasets.len()).map_err(|_| IngestError::TooManyDatasets)?;
        self.datasets.push(tag.to_owned());
        Ok(DatasetId(id))
    }

    /// Streams one N-Triples source into the corpus under a fresh dataset tag.
    pub fn ingest<R: BufRead>(
        &mut self,
        source: R,
        tag: &str,
        policy: MalformedPolicy,
    ) -> Result<SourceReport, IngestError> {
        let dataset = self.add_dataset(tag)?;
        let mut reader = StatementReader::new(source, policy);
        let mut triples = 0;
        for stmt in reader.by_ref() {
            let stmt = stmt.map_err(|e| IngestError::Parse(tag.to_owned(), e))?;
            let subject = self.interner.intern(stmt.subject);
            let predicate = self.interner.intern(stmt.predicate);
            let object = self.interner.intern(stmt.object);
            self.triples.push(Triple {
                subject,
                predicate,
                object,
                dataset,
            });
            triples += 1;
        }
        if reader.malformed_count() > 0 {
            log::warn!(
                "{tag}: skipped {} malformed line(s)",
                reader.malformed_count()
            );
        }
        Ok(SourceReport {
            dataset: tag.to_owned(),
            lines: reader.lines_read(),
            triples,
            malformed: reader.malformed_count(),
        })
    }

    /// Appends another corpus, re-interning its terms into this one's id
    /// space. Dataset tags must not collide.
    pub fn merge(&mut self, other: Corpus) -> Result<(), IngestError> {
        let mut dataset_map = Vec::with_capacity(other.datasets.len());
        for tag in &other.datasets {
            dataset_map.push(self.add_dataset(tag)?);
        }
        let term_map: Vec<TermId> = other
            .interner
            .iter()
            .map(|(_, t)| self.interner.intern(t.clone()))
            .collect();
        self.triples.extend(other.triples.iter().map(|t| Triple {
            subject: term_map[t.subject.index()],
            predicate: term_map[t.predicate.index()],
            object: term_map[t.object.index()],
            dataset: dataset_map[t.dataset.0 as usize],
        }));
        Ok(())
    }

    /// Convenience for tests and examples: ingest an in-memory document.
    pub fn ingest_str(&mut self, text: &str, tag: &str) -> Result<SourceReport, IngestError> {
        self.ingest(text.as_bytes(), tag, MalformedPolicy::Strict)
    }

    /// Returns a corpus sharing this one's interner and datasets but holding
    /// a different triple list.
    pub fn with_triples(&self, triples: Vec<Triple>) -> Corpus {
        Corpus {
            interner: self.interner.clone(),
            triples,
            datasets: self.datasets.clone(),
        }
    }

    /// Distinct predicates in ascending IRI order.
    pub fn predicates(&self) -> Vec<TermId> {
        let mut preds: Vec<TermId> = self.triples.iter().map(|t| t.predicate).collect();
        preds.sort_unstable();
        preds.dedup();
        preds.sort_by(|a, b| self.term(*a).value().cmp(self.term(*b).value()));
        preds
    }

    /// Writes the triples back out in N-Triples form.
    pub fn write_ntriples<W: std::io::Write>(
        &self,
        triples: &[Triple],
        mut out: W,
    ) -> std::io::Result<()> {
        for t in triples {
            writeln!(
                out,
                "{} {} {} .",
                self.term(t.subject),
                self.term(t.predicate),
                self.term(t.object)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_tags_rejected() {
        let mut corpus = Corpus::new();
        corpus.add_dataset("a").unwrap();
        assert!(matches!(
            corpus.add_dataset("a"),
            Err(IngestError::DuplicateTag(_))
        ));
        assert!(matches!(corpus.add_dataset(""), Err(IngestError::EmptyTag)));
    }

    #[test]
    fn ingest_interns_shared_terms_once() {
        let mut corpus = Corpus::new();
        corpus
            .ingest_str(
                "<http://a> <http://p> <http://b> .\n<http://b> <http://p> \"x\" .\n",
                "d",
            )
            .unwrap();
        assert_eq!(corpus.triples.len(), 2);
        assert_eq!(corpus.interner.len(), 4);
        assert_eq!(corpus.triples[0].object, corpus.triples[1].subject);
    }

    #[test]
    fn merge_remaps_ids() {
        let mut a = Corpus::new();
        a.ingest_str("<http://x> <http://p> <http://y> .\n", "a").unwrap();
        let mut b = Corpus::new();
        b.ingest_str("<http://y> <http://q> <http://x> .\n", "b").unwrap();
        a.merge(b).unwrap();
        assert_eq!(a.interner.len(), 4);
        assert_eq!(a.triples[1].subject, a.triples[0].object);
        assert_eq!(a.dataset_name(a.triples[1].dataset), "b");
    }

    #[test]
    fn predicates_sorted_by_iri() {
        let mut corpus = Corpus::new();
        corpus
            .ingest_str(
                "<http://a> <http://z> <http://b> .\n<http://a> <http://m> <http://b> .\n<http://a> <http://z> <http://c> .\n",
                "d",
            )
            .unwrap();
        let names: Vec<_> = corpus
            .predicates()
            .into_iter()
            .map(|p| corpus.term(p).value().to_owned())
            .collect();
        assert_eq!(names, vec!["http://m", "http://z"]);
    }
}
