//! Streams N-Triples files (plain or gzipped) into one corpus, prints
//! per-dataset statistics and the effect of dropping built-in predicates.
//!
//! cargo run --example ingest_stats -- data/a.nt data/b.nt.gz
//!
//! Without arguments a small generated two-dataset corpus is used.

use semcluster::rdf::{
    corpus_stats, filter_builtin_predicates, open_source, Blocklist, Corpus, MalformedPolicy,
};
use semcluster::synthetic::{generate, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut corpus = Corpus::new();
    let paths: Vec<String> = std::env::args().skip(1).collect();
    if paths.is_empty() {
        for (tag, doc) in generate(&CorpusSpec::two_domain(12, 100, 1)) {
            corpus.ingest_str(&doc, &tag)?;
        }
    }
    for path in &paths {
        let tag = std::path::Path::new(path)
            .file_name()
            .and_then(|n| n.to_str())
            .map_or(path.as_str(), |n| n.split('.').next().unwrap_or(n))
            .to_owned();
        let report = corpus.ingest(open_source(path.as_ref())?, &tag, MalformedPolicy::SkipMalformed)?;
        println!(
            "{}: {} lines, {} triples, {} malformed",
            report.dataset, report.lines, report.triples, report.malformed
        );
    }

    let stats = corpus_stats(&corpus, &corpus.triples);
    print!("{}", stats.to_table());

    let (kept, summary) =
        filter_builtin_predicates(&corpus, &corpus.triples, &Blocklist::default());
    println!(
        "built-in filter: {} -> {} predicates ({} dropped), {} -> {} triples",
        summary.predicates_before,
        summary.predicates_after,
        summary.removed_predicates,
        summary.triples_before,
        kept.len()
    );
    println!("distinct terms interned: {}", corpus.interner.len());
    Ok(())
}
