mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{components, entity_sets, floyd_warshall, random_triples, render};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semcluster::rdf::Corpus;
use semcluster::schema::{
    build_incidence, neighbor_levels, project_predicates, reachable, write_projection_csv,
    PredicateProjection, ProjectionEdge, UNBOUNDED,
};

fn corpus_of(doc: &str) -> Corpus {
    let mut corpus = Corpus::new();
    corpus.ingest_str(doc, "t").unwrap();
    corpus
}

/// Incidence as predicate label -> set of entity terms in N-Triples form.
fn incidence_as_strings(corpus: &Corpus) -> BTreeMap<String, BTreeSet<String>> {
    let index = build_incidence(corpus, &corpus.triples);
    (0..index.len())
        .map(|i| {
            let set = index.neighbors(i).iter().map(|&e| corpus.term(e).to_string()).collect();
            (index.label(i).to_owned(), set)
        })
        .collect()
}

#[test]
fn single_triple_and_union() {
    let corpus = corpus_of("<http://s> <http://p> <http://o> .\n");
    let index = build_incidence(&corpus, &corpus.triples);
    assert_eq!(index.neighbors(0).len(), 2);

    let corpus = corpus_of("<http://a> <http://p> <http://b> .\n<http://b> <http://p> <http://c> .\n");
    let index = build_incidence(&corpus, &corpus.triples);
    assert_eq!(index.neighbors(0).len(), 3);
}

#[test]
fn twelve_triple_fixture_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let triples: Vec<_> = std::iter::repeat_with(|| random_triples(&mut rng, 12, 3))
        .find(|t| t.len() == 12 && entity_sets(t).len() == 3)
        .unwrap();
    let corpus = corpus_of(&render(&triples));
    assert_eq!(incidence_as_strings(&corpus), entity_sets(&triples));
}

#[test]
fn disjoint_and_single_shared() {
    let corpus = corpus_of(
        "<http://a> <http://p1> <http://b> .\n<http://b> <http://p2> <http://c> .\n<http://x> <http://p3> <http://y> .\n",
    );
    let index = build_incidence(&corpus, &corpus.triples);
    let proj = project_predicates(&index);
    assert_eq!(proj.edges(), &[ProjectionEdge { a: 0, b: 1, shared: 1 }]);
    assert_eq!(proj.shared_count(0, 2), 0);
}

#[test]
fn chain_levels_and_components() {
    let proj = PredicateProjection::from_edges(
        5,
        vec![
            ProjectionEdge { a: 0, b: 1, shared: 1 },
            ProjectionEdge { a: 1, b: 2, shared: 1 },
            ProjectionEdge { a: 3, b: 4, shared: 1 },
        ],
    );
    let levels = neighbor_levels(&proj, 4);
    assert_eq!(levels.level(0, 1), Some(1));
    assert_eq!(levels.level(0, 2), Some(2));
    assert_eq!(levels.level(2, 2), Some(0));
    assert!(reachable(2, 2, &levels));
    assert!(!reachable(0, 3, &levels));
}

#[test]
fn projection_csv_lists_reachable_pairs() {
    let corpus = corpus_of(
        "<http://a> <http://p1> <http://b> .\n<http://b> <http://p2> <http://c> .\n<http://c> <http://p3> <http://d> .\n",
    );
    let index = build_incidence(&corpus, &corpus.triples);
    let proj = project_predicates(&index);
    let levels = neighbor_levels(&proj, 4);
    let mut out = Vec::new();
    write_projection_csv(&index, &proj, &levels, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(
        text,
        "pi,pj,shared_count,level\nhttp://p1,http://p2,1,1\nhttp://p1,http://p3,0,2\nhttp://p2,http://p3,1,1\n"
    );
}

fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize) -> (usize, Vec<Vec<bool>>) {
    let n = rng.gen_range(1..=max_nodes);
    let p = rng.gen_range(0.02..0.4);
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    (n, adj)
}

fn projection_of(n: usize, adj: &[Vec<bool>]) -> PredicateProjection {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adj[i][j] {
                edges.push(ProjectionEdge { a: i, b: j, shared: 1 });
            }
        }
    }
    PredicateProjection::from_edges(n, edges)
}

#[test]
fn levels_match_floyd_warshall_and_union_find() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (n, adj) = random_graph(&mut rng, 30);
        let proj = projection_of(n, &adj);
        let dist = floyd_warshall(&adj);
        let comp = components(&adj);
        let unbounded = neighbor_levels(&proj, UNBOUNDED);
        let lmax = rng.gen_range(1..=5);
        let capped = neighbor_levels(&proj, lmax);
        for i in 0..n {
            for j in 0..n {
                assert_eq!(unbounded.level(i, j), dist[i][j]);
                assert_eq!(capped.level(i, j), dist[i][j].filter(|&d| d <= lmax));
                assert_eq!(reachable(i, j, &unbounded), comp[i] == comp[j]);
            }
        }
    }
}

proptest! {
    #[test]
    fn incidence_projection_invariants(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples = random_triples(&mut rng, 40, 6);
        let corpus = corpus_of(&render(&triples));
        let index = build_incidence(&corpus, &corpus.triples);
        prop_assert_eq!(incidence_as_strings(&corpus), entity_sets(&triples));

        // Forward and reverse maps agree.
        for i in 0..index.len() {
            prop_assert!(!index.neighbors(i).is_empty());
            for &e in index.neighbors(i) {
                prop_assert!(index.predicates_of(e).contains(&i));
            }
        }
        for (e, preds) in index.entities() {
            for &p in preds {
                prop_assert!(index.neighbors(p).contains(&e));
            }
        }
        prop_assert_eq!(index.total_triples(), corpus.triples.len() as u64);

        // Edges are exactly the pairs with a non-empty intersection.
        let sets: Vec<BTreeSet<_>> = (0..index.len()).map(|i| index.neighbors(i).iter().copied().collect()).collect();
        let proj = project_predicates(&index);
        for i in 0..index.len() {
            for j in 0..index.len() {
                let shared = if i == j { 0 } else { sets[i].intersection(&sets[j]).count() };
                prop_assert_eq!(proj.shared_count(i, j), shared);
                prop_assert_eq!(proj.neighbors(i).contains(&j), shared > 0);
            }
        }

        // Levels are symmetric and satisfy the triangle inequality.
        let levels = neighbor_levels(&proj, UNBOUNDED);
        for i in 0..index.len() {
            for j in 0..index.len() {
                prop_assert_eq!(levels.level(i, j), levels.level(j, i));
                for k in 0..index.len() {
                    if let (Some(a), Some(b), Some(c)) = (levels.level(i, j), levels.level(i, k), levels.level(k, j)) {
                        prop_assert!(a <= b + c);
                    }
                }
            }
        }
    }
}
