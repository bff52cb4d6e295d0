use std::collections::HashMap;

use super::incidence::IncidenceIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjectionEdge {
    pub a: usize,
    pub b: usize,
    pub shared: usize,
}

/// Undirected predicate co-occurrence graph: predicates are adjacent when
/// they share at least one entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateProjection {
    n: usize,
    edges: Vec<ProjectionEdge>,
    adjacency: Vec<Vec<usize>>,
}

pub fn project_predicates(index: &IncidenceIndex) -> PredicateProjection {
    let mut shared: HashMap<(usize, usize), usize> = HashMap::new();
    for (_, preds) in index.entities() {
        for (x, &a) in preds.iter().enumerate() {
            for &b in &preds[x + 1..] {
                *shared.entry((a, b)).or_default() += 1;
            }
        }
    }
    let edges = shared
        .into_iter()
        .map(|((a, b), shared)| ProjectionEdge { a, b, shared })
        .collect();
    PredicateProjection::from_edges(index.len(), edges)
}

impl PredicateProjection {
    /// Builds a projection from explicit edges. Each edge is normalised to
    /// `a < b`; self-loops and zero-count edges are dropped.
    pub fn from_edges(n: usize, edges: Vec<ProjectionEdge>) -> Self {
        let mut edges: Vec<ProjectionEdge> = edges
            .into_iter()
            .filter(|e| e.a != e.b && e.shared > 0)
            .map(|e| ProjectionEdge {
                a: e.a.min(e.b),
                b: e.a.max(e.b),
                shared: e.shared,
            })
            .collect();
        edges.sort_unstable();
        edges.dedup_by(|x, y| x.a == y.a && x.b == y.b);
        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.a].push(e.b);
            adjacency[e.b].push(e.a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        Self {
            n,
            edges,
            adjacency,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[ProjectionEdge] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn shared_count(&self, a: usize, b: usize) -> usize {
        let (a, b) = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.a, e.b).cmp(&(a, b)))
            .map_or(0, |k| self.edges[k].shared)
    }
}
