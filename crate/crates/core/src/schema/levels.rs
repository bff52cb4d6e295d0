use std::collections::VecDeque;

use rayon::prelude::*;

use super::projection::PredicateProjection;

/// Default cap on explored neighbour levels.
pub const DEFAULT_LMAX: u32 = 4;

/// Pass as `lmax` to explore without a cap.
pub const UNBOUNDED: u32 = u32::MAX - 1;

const UNREACHABLE: u32 = u32::MAX;

/// Pairwise neighbour levels: shortest hop count between two predicates in
/// the projection graph, or unreachable when farther than `lmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMatrix {
    n: usize,
    lmax: u32,
    levels: Vec<u32>,
}

/// Breadth-first search from every predicate, truncated at `lmax` hops.
pub fn neighbor_levels(projection: &PredicateProjection, lmax: u32) -> LevelMatrix {
    assert!(lmax >= 1, "lmax must be at least 1");
    let n = projection.node_count();
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|source| bfs_row(projection, source, lmax))
        .collect();
    LevelMatrix {
        n,
        lmax,
        levels: rows.concat(),
    }
}

fn bfs_row(projection: &PredicateProjection, source: usize, lmax: u32) -> Vec<u32> {
    let mut row = vec![UNREACHABLE; projection.node_count()];
    row[source] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let next = row[u] + 1;
        if next > lmax {
            continue;
        }
        for &v in projection.neighbors(u) {
            if row[v] == UNREACHABLE {
                row[v] = next;
                queue.push_back(v);
            }
        }
    }
    row
}

impl LevelMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    /// `None` when unreachable within `lmax`.
    pub fn level(&self, i: usize, j: usize) -> Option<u32> {
        match self.levels[i * self.n + j] {
            UNREACHABLE => None,
            l => Some(l),
        }
    }

    pub fn reachable(&self, i: usize, j: usize) -> bool {
        self.level(i, j).is_some()
    }

    /// Largest finite level present.
    pub fn max_level(&self) -> u32 {
        self.levels
            .iter()
            .copied()
            .filter(|&l| l != UNREACHABLE)
            .max()
            .unwrap_or(0)
    }
}

/// True iff `pi` and `pj` are within `lmax` hops of each other.
pub fn reachable(pi: usize, pj: usize, levels: &LevelMatrix) -> bool {
    levels.reachable(pi, pj)
}
