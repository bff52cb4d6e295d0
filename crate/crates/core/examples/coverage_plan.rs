//! Dataset coverage of leaf clusters and a first-fit-decreasing machine
//! plan, on a generated five-domain corpus.

use semcluster::analytics::{coverage_report, partition_plan, predicate_dataset_tags};
use semcluster::clustering::{hfcm, HfcmConfig};
use semcluster::pipeline::similarity_matrix;
use semcluster::rdf::{filter_builtin_predicates, Blocklist, Corpus};
use semcluster::schema::{build_incidence, DEFAULT_LMAX};
use semcluster::synthetic::{generate, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = CorpusSpec::five_domain(3);
    let mut corpus = Corpus::new();
    for (tag, doc) in generate(&spec) {
        corpus.ingest_str(&doc, &tag)?;
    }
    let (triples, _) = filter_builtin_predicates(&corpus, &corpus.triples, &Blocklist::default());
    let index = build_incidence(&corpus, &triples);
    let cm = similarity_matrix(&index, DEFAULT_LMAX)?;
    let capacity = 400;
    let tree = hfcm(&cm, index.triple_counts(), &HfcmConfig { capacity, ..Default::default() })?;

    let tags = predicate_dataset_tags(&corpus, &triples);
    let report = coverage_report(&tree, &tags)?;
    for c in &report.clusters {
        let parts: Vec<String> = c
            .datasets
            .iter()
            .map(|d| format!("{} {:.0}%", d.dataset, d.fraction * 100.0))
            .collect();
        println!("leaf {:>2} ({:<7}) load {:>4}: {}", c.leaf, c.node_id, c.triple_load, parts.join(", "));
    }

    let plan = partition_plan(&tree, capacity);
    for m in &plan.machines {
        println!("machine {}: leaves {:?}, load {}/{capacity}", m.id, m.leaves, m.load);
    }
    Ok(())
}
