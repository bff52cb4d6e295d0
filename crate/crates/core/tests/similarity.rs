mod common;

use std::collections::BTreeSet;

use common::{entity_sets, level1_oracle, propagation_oracle, random_triples, render};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semcluster::rdf::{Corpus, Term};
use semcluster::schema::{build_incidence, neighbor_levels, project_predicates, IncidenceIndex};
use semcluster::similarity::{
    assemble_matrix, level1_similarity, propagate_similarity, SimilarityError, SimilarityMatrix,
};

fn cm_of(index: &IncidenceIndex, lmax: u32) -> SimilarityMatrix {
    let levels = neighbor_levels(&project_predicates(index), lmax);
    assemble_matrix(&propagate_similarity(&levels, index), index.labels()).unwrap()
}

#[test]
fn three_predicate_fixture_elementwise() {
    let sets: Vec<Vec<u32>> = vec![vec![1, 2, 3, 4], vec![3, 4, 5], vec![9]];
    let index = IncidenceIndex::from_entity_sets(&sets);
    let cm = cm_of(&index, 4);
    let oracle = propagation_oracle(
        &sets.iter().map(|s| s.iter().copied().collect::<BTreeSet<_>>()).collect::<Vec<_>>(),
        4,
    );
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(cm.get(i, j), oracle[i][j], "({i},{j})");
        }
    }
    // 2 shared of 4 and of 3: (2/4)(2/3)
    assert_eq!(cm.get(0, 1), (2.0 / 4.0) * (2.0 / 3.0));
    assert_eq!(cm.get(0, 2), 0.0);
}

#[test]
fn identical_and_disjoint_sets() {
    let index = IncidenceIndex::from_entity_sets(&[vec![1, 2], vec![1, 2], vec![7, 8]]);
    let cm = cm_of(&index, 4);
    assert_eq!(cm.get(0, 1), 1.0);
    assert_eq!(cm.get(0, 2), 0.0);
    for i in 0..3 {
        assert_eq!(cm.get(i, i), 1.0);
    }
}

#[test]
fn chain_uses_product_rule() {
    let index = IncidenceIndex::from_entity_sets(&[
        (1..=5).collect(),
        (1..=10).collect(),
        (7..=10).collect(),
    ]);
    let cm = cm_of(&index, 4);
    assert_eq!(cm.get(0, 1), 0.5);
    assert_eq!(cm.get(1, 2), 0.4);
    assert!((cm.get(0, 2) - 0.2).abs() < 1e-15);
}

#[test]
fn unknown_predicate_is_rejected() {
    let mut corpus = Corpus::new();
    corpus.ingest_str("<http://a> <http://p> <http://b> .\n", "d").unwrap();
    let index = build_incidence(&corpus, &corpus.triples);
    let p = corpus.interner.get(&Term::iri("http://p")).unwrap();
    let a = corpus.interner.get(&Term::iri("http://a")).unwrap();
    assert_eq!(level1_similarity(p, p, &index).unwrap(), 1.0);
    assert!(matches!(
        level1_similarity(p, a, &index),
        Err(SimilarityError::UnknownPredicate(_))
    ));
}

#[test]
fn level1_matches_set_enumeration_on_parsed_corpora() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let triples = random_triples(&mut rng, 50, 8);
        let mut corpus = Corpus::new();
        corpus.ingest_str(&render(&triples), "r").unwrap();
        let index = build_incidence(&corpus, &corpus.triples);
        let oracle = entity_sets(&triples);
        for (pa, a) in &oracle {
            for (pb, b) in &oracle {
                let ia = corpus.interner.get(&Term::iri(pa.as_str())).unwrap();
                let ib = corpus.interner.get(&Term::iri(pb.as_str())).unwrap();
                assert_eq!(level1_similarity(ia, ib, &index).unwrap(), level1_oracle(a, b));
            }
        }
    }
}

#[test]
fn propagation_matches_exhaustive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut deep_pairs = 0;
    for round in 0..150 {
        let n = rng.gen_range(2..=10);
        let universe = rng.gen_range(n as u32..=3 * n as u32);
        // Small sets over a shared universe give sparse chains.
        let sets: Vec<Vec<u32>> = (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=3);
                let mut s: Vec<u32> = (0..k).map(|_| rng.gen_range(0..universe)).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        let lmax = if round % 3 == 0 { rng.gen_range(1..=4) } else { 4 };
        let index = IncidenceIndex::from_entity_sets(&sets);
        let cm = cm_of(&index, lmax);
        let levels = neighbor_levels(&project_predicates(&index), lmax);
        deep_pairs += (0..n * n).filter(|&x| levels.level(x / n, x % n) >= Some(3)).count();
        let oracle = propagation_oracle(
            &sets.iter().map(|s| s.iter().copied().collect::<BTreeSet<_>>()).collect::<Vec<_>>(),
            lmax,
        );
        for i in 0..n {
            for j in 0..n {
                assert!((cm.get(i, j) - oracle[i][j]).abs() <= 1e-12, "round {round} ({i},{j})");
            }
        }
    }
    assert!(deep_pairs > 100, "only {deep_pairs} pairs beyond level 2");
}

#[test]
fn matrix_is_symmetric_bounded_and_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let triples = random_triples(&mut rng, 60, 10);
        let mut corpus = Corpus::new();
        corpus.ingest_str(&render(&triples), "r").unwrap();
        let index = build_incidence(&corpus, &corpus.triples);
        let a = cm_of(&index, 4);
        let b = cm_of(&index, 4);
        assert_eq!(a, b);
        for i in 0..a.len() {
            assert_eq!(a.get(i, i), 1.0);
            for j in 0..a.len() {
                assert_eq!(a.get(i, j).to_bits(), a.get(j, i).to_bits());
                assert!((0.0..=1.0).contains(&a.get(i, j)));
            }
        }
    }
}

#[test]
fn csv_and_binary_round_trip() {
    let index = IncidenceIndex::from_entity_sets(&[vec![1, 2, 3], vec![2, 3], vec![3, 7], vec![11]]);
    let cm = cm_of(&index, 4);

    let mut csv = Vec::new();
    cm.write_csv(&mut csv).unwrap();
    assert!(csv.starts_with(b",p0,p1,p2,p3\n"));
    assert_eq!(SimilarityMatrix::read_csv(csv.as_slice()).unwrap(), cm);

    let mut bin = Vec::new();
    cm.write_binary(&mut bin).unwrap();
    assert_eq!(bin.len(), 8 + 8 + 16 * 8);
    assert_eq!(SimilarityMatrix::read_binary(bin.as_slice(), cm.labels().to_vec()).unwrap(), cm);

    bin.truncate(40);
    assert!(SimilarityMatrix::read_binary(bin.as_slice(), cm.labels().to_vec()).is_err());
    let mut bad = Vec::new();
    cm.write_binary(&mut bad).unwrap();
    bad[0] = b'X';
    assert!(SimilarityMatrix::read_binary(bad.as_slice(), cm.labels().to_vec()).is_err());
}
