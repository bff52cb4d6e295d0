//! Entity-overlap similarity between predicates, propagated along paths
//! in the projection graph, written as CSV and in the binary format.

use semcluster::schema::{neighbor_levels, project_predicates, IncidenceIndex};
use semcluster::similarity::{assemble_matrix, level1_score, propagate_similarity, SimilarityMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // p0 and p1 overlap on 5 entities, p1 and p2 on 4; p0 and p2 only
    // meet through p1. p3 stands alone.
    let index = IncidenceIndex::from_entity_sets(&[
        (1..=5).collect(),
        (1..=10).collect(),
        (7..=10).collect(),
        vec![100, 101],
    ]);
    println!("direct: ps(p0,p1) = {}", level1_score(&index, 0, 1));
    println!("direct: ps(p1,p2) = {}", level1_score(&index, 1, 2));

    let levels = neighbor_levels(&project_predicates(&index), 4);
    let cm = assemble_matrix(&propagate_similarity(&levels, &index), index.labels())?;
    println!("through p1: ps(p0,p2) = {}", cm.get(0, 2));
    println!();
    cm.write_csv(std::io::stdout().lock())?;

    let mut bytes = Vec::new();
    cm.write_binary(&mut bytes)?;
    let back = SimilarityMatrix::read_binary(bytes.as_slice(), cm.labels().to_vec())?;
    assert_eq!(back, cm);
    println!("\nbinary form: {} bytes, round-trips exactly", bytes.len());
    Ok(())
}
