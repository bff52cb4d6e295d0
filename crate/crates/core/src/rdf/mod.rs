//! N-Triples ingestion: parsing, term interning, dataset tagging,
//! built-in predicate filtering and corpus statistics.

mod corpus;
mod filter;
mod ntriples;
mod stats;
mod term;

pub use corpus::{Corpus, DatasetId, IngestError, SourceReport, Triple};
pub use filter::{
    filter_builtin_predicates, Blocklist, FilterSummary, OWL_NS, RDFS_NS, RDF_NS, RDF_TYPE,
};
pub use ntriples::{
    open_source, parse_line, MalformedPolicy, ParseError, Statement, StatementReader, SyntaxError,
};
pub use stats::{corpus_stats, CorpusStats, Counts, DatasetCounts, UNTYPED};
pub use term::{Interner, Literal, LiteralAnnotation, Term, TermId, TermKind};
