//! Capacity-driven hierarchical clustering on a generated corpus with five
//! domains, two of which are too large for one machine and get re-split.
//!
//! cargo run --release --example hfcm_capacity [seed]

use semcluster::analytics::ClustersDocument;
use semcluster::clustering::{hfcm, FcmParams, HfcmConfig};
use semcluster::pipeline::{format_k_diagnostics, format_level_counts, similarity_matrix};
use semcluster::rdf::{filter_builtin_predicates, Blocklist, Corpus};
use semcluster::schema::{build_incidence, DEFAULT_LMAX};
use semcluster::synthetic::{generate, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map_or(Ok(7), |s| s.parse())?;
    let spec = CorpusSpec::five_domain(seed);
    let mut corpus = Corpus::new();
    for (tag, doc) in generate(&spec) {
        corpus.ingest_str(&doc, &tag)?;
    }
    let (triples, _) = filter_builtin_predicates(&corpus, &corpus.triples, &Blocklist::default());
    let index = build_incidence(&corpus, &triples);
    let cm = similarity_matrix(&index, DEFAULT_LMAX)?;

    // One subdomain fits, any multi-subdomain domain does not.
    let capacity = spec.subdomain_load(4) + spec.subdomain_load(4) / 4;
    let config = HfcmConfig {
        capacity,
        fcm: FcmParams::default().with_seed(seed),
        ..Default::default()
    };
    let tree = hfcm(&cm, index.triple_counts(), &config)?;

    print!("{}", format_k_diagnostics(&tree));
    print!("{}", format_level_counts(&tree));
    for leaf in tree.leaves() {
        let names: Vec<&str> = leaf
            .members
            .iter()
            .map(|&m| tree.predicates[m].trim_start_matches(semcluster::synthetic::BASE))
            .collect();
        println!("{} load {}: {}", leaf.id, leaf.triple_load, names.join(" "));
    }
    let doc = ClustersDocument::new(tree);
    println!("leaves: {}", doc.leaf_count);
    Ok(())
}
