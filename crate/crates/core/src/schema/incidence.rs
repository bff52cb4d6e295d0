use std::collections::HashMap;

use crate::rdf::{Corpus, TermId, Triple};

/// Predicate to entity incidence, direction ignored.
///
/// Predicates are stored at dense positions in ascending IRI order; every
/// downstream matrix uses the same positions as its row order.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceIndex {
    predicates: Vec<TermId>,
    labels: Vec<String>,
    position: HashMap<TermId, usize>,
    neighbors: Vec<Vec<TermId>>,
    reverse: HashMap<TermId, Vec<usize>>,
    triple_counts: Vec<u64>,
}

/// Collects, for every predicate, the subjects and objects it touches.
pub fn build_incidence(corpus: &Corpus, triples: &[Triple]) -> IncidenceIndex {
    let mut sets: HashMap<TermId, (Vec<TermId>, u64)> = HashMap::new();
    for t in triples {
        let entry = sets.entry(t.predicate).or_default();
        entry.0.push(t.subject);
        entry.0.push(t.object);
        entry.1 += 1;
    }
    let parts = sets
        .into_iter()
        .map(|(p, (entities, count))| (p, corpus.term(p).value().to_owned(), entities, count))
        .collect();
    IncidenceIndex::from_parts(parts)
}

impl IncidenceIndex {
    /// Builds an index from `(predicate id, label, entities, triple count)`
    /// tuples. Entities need not be sorted or unique.
    pub fn from_parts(mut parts: Vec<(TermId, String, Vec<TermId>, u64)>) -> Self {
        parts.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        let mut predicates = Vec::with_capacity(parts.len());
        let mut labels = Vec::with_capacity(parts.len());
        let mut neighbors = Vec::with_capacity(parts.len());
        let mut triple_counts = Vec::with_capacity(parts.len());
        let mut position = HashMap::with_capacity(parts.len());
        let mut reverse: HashMap<TermId, Vec<usize>> = HashMap::new();
        for (i, (p, label, mut entities, count)) in parts.into_iter().enumerate() {
            entities.sort_unstable();
            entities.dedup();
            for &e in &entities {
                reverse.entry(e).or_default().push(i);
            }
            position.insert(p, i);
            predicates.push(p);
            labels.push(label);
            neighbors.push(entities);
            triple_counts.push(count);
        }
        Self {
            predicates,
            labels,
            position,
            neighbors,
            reverse,
            triple_counts,
        }
    }

    /// Index of synthetic predicates labelled by position, for fixtures.
    pub fn from_entity_sets(sets: &[Vec<u32>]) -> Self {
        let width = sets.len().to_string().len();
        let parts = sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                (
                    TermId(i as u32),
                    format!("p{i:0width$}"),
                    s.iter().map(|&e| TermId(e)).collect(),
                    s.len() as u64,
                )
            })
            .collect();
        Self::from_parts(parts)
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    pub fn predicate(&self, i: usize) -> TermId {
        self.predicates[i]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, predicate: TermId) -> Option<usize> {
        self.position.get(&predicate).copied()
    }

    /// Sorted, distinct entities connected to predicate `i`.
    pub fn neighbors(&self, i: usize) -> &[TermId] {
        &self.neighbors[i]
    }

    /// Sorted predicate positions connected to `entity`.
    pub fn predicates_of(&self, entity: TermId) -> &[usize] {
        self.reverse.get(&entity).map_or(&[], Vec::as_slice)
    }

    pub fn entities(&self) -> impl Iterator<Item = (TermId, &[usize])> {
        self.reverse.iter().map(|(e, ps)| (*e, ps.as_slice()))
    }

    pub fn triple_count(&self, i: usize) -> u64 {
        self.triple_counts[i]
    }

    pub fn triple_counts(&self) -> &[u64] {
        &self.triple_counts
    }

    pub fn total_triples(&self) -> u64 {
        self.triple_counts.iter().sum()
    }

    /// |neighbors(i) ∩ neighbors(j)|.
    pub fn shared_count(&self, i: usize, j: usize) -> usize {
        sorted_intersection_len(&self.neighbors[i], &self.neighbors[j])
    }

    /// Sub-index holding only the given predicate positions, renumbered in
    /// the order given (which must be ascending to keep IRI order).
    pub fn restrict(&self, members: &[usize]) -> IncidenceIndex {
        let parts = members
            .iter()
            .map(|&i| {
                (
                    self.predicates[i],
                    self.labels[i].clone(),
                    self.neighbors[i].clone(),
                    self.triple_counts[i],
                )
            })
            .collect();
        Self::from_parts(parts)
    }
}

pub(crate) fn sorted_intersection_len<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}
