//! Predicate projection and neighbour levels on a hand-written graph.
//!
//! Four predicates form a chain through shared entities; a fifth shares
//! nothing and stays unreachable.

use semcluster::rdf::Corpus;
use semcluster::schema::{build_incidence, neighbor_levels, project_predicates, write_projection_dot};

const DOC: &str = r#"
<http://ex/drug1> <http://ex/target> <http://ex/gene1> .
<http://ex/drug2> <http://ex/target> <http://ex/gene2> .
<http://ex/gene1> <http://ex/encodes> <http://ex/protein1> .
<http://ex/protein1> <http://ex/pathway> <http://ex/pw1> .
<http://ex/pw1> <http://ex/label> "glycolysis" .
<http://ex/doc1> <http://ex/title> "unrelated" .
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut corpus = Corpus::new();
    corpus.ingest_str(DOC, "demo")?;
    let index = build_incidence(&corpus, &corpus.triples);
    let projection = project_predicates(&index);
    let levels = neighbor_levels(&projection, 4);

    println!("{} predicates, {} projection edges", index.len(), projection.edges().len());
    for i in 0..index.len() {
        for j in i + 1..index.len() {
            let level = levels
                .level(i, j)
                .map_or("unreachable".to_owned(), |l| format!("level {l}"));
            println!("{:>22} ~ {:<22} {level}", index.label(i), index.label(j));
        }
    }
    println!();
    write_projection_dot(&index, &projection, std::io::stdout().lock())?;
    Ok(())
}
