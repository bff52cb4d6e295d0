//! Reference implementations used as oracles by the integration tests.
//! They follow the textbook definitions directly and favour clarity over
//! speed.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use semcluster::matrix::Matrix;

/// A generated triple in plain strings, already in N-Triples term syntax.
#[derive(Clone, Debug)]
pub struct RawTriple {
    pub s: String,
    pub p: String,
    pub o: String,
}

pub fn render(triples: &[RawTriple]) -> String {
    triples
        .iter()
        .map(|t| format!("{} {} {} .\n", t.s, t.p, t.o))
        .collect()
}

/// Random triples over small vocabularies, so overlaps are common.
pub fn random_triples<R: Rng>(rng: &mut R, max_triples: usize, max_predicates: usize) -> Vec<RawTriple> {
    let n = rng.gen_range(1..=max_triples);
    let preds = rng.gen_range(1..=max_predicates);
    let entities = rng.gen_range(2..=12);
    (0..n)
        .map(|_| {
            let s = format!("<http://ex.org/e{}>", rng.gen_range(0..entities));
            let p = format!("<http://ex.org/p{}>", rng.gen_range(0..preds));
            let o = match rng.gen_range(0..4) {
                0 => format!("\"lit{}\"", rng.gen_range(0..3)),
                1 => format!("_:b{}", rng.gen_range(0..3)),
                _ => format!("<http://ex.org/e{}>", rng.gen_range(0..entities)),
            };
            RawTriple { s, p, o }
        })
        .collect()
}

/// Predicate IRI (without brackets) to the set of its subject and object
/// terms.
pub fn entity_sets(triples: &[RawTriple]) -> BTreeMap<String, BTreeSet<String>> {
    let mut sets: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for t in triples {
        let p = t.p.trim_start_matches('<').trim_end_matches('>').to_owned();
        let e = sets.entry(p).or_default();
        e.insert(t.s.clone());
        e.insert(t.o.clone());
    }
    sets
}

/// Overlap score by enumerating one set and probing the other.
pub fn level1_oracle<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut c = 0usize;
    for x in a {
        if b.contains(x) {
            c += 1;
        }
    }
    (c as f64 / a.len() as f64) * (c as f64 / b.len() as f64)
}

/// Adjacency of the projection graph: two sets are linked iff they meet.
pub fn overlap_adjacency<T: Ord>(sets: &[BTreeSet<T>]) -> Vec<Vec<bool>> {
    let n = sets.len();
    let mut adj = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            adj[i][j] = i != j && sets[i].intersection(&sets[j]).next().is_some();
        }
    }
    adj
}

/// All-pairs shortest hop counts by Floyd–Warshall.
pub fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<Option<u32>>> {
    let n = adj.len();
    const INF: u64 = u64::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter()
        .map(|row| row.into_iter().map(|x| (x < INF).then_some(x as u32)).collect())
        .collect()
}

/// Connected components by union-find; returns a representative per node.
pub fn components(adj: &[Vec<bool>]) -> Vec<usize> {
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let n = adj.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if adj[i][j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect()
}

/// Propagated similarity by top-down recursion over every admissible
/// intermediate decomposition, memoised per pair.
pub fn propagation_oracle<T: Ord>(sets: &[BTreeSet<T>], lmax: u32) -> Vec<Vec<f64>> {
    let n = sets.len();
    let dist = floyd_warshall(&overlap_adjacency(sets));
    let level = |i: usize, j: usize| dist[i][j].filter(|&d| d <= lmax);
    let mut memo: HashMap<(usize, usize), f64> = HashMap::new();

    fn score<T: Ord>(
        i: usize,
        j: usize,
        sets: &[BTreeSet<T>],
        level: &dyn Fn(usize, usize) -> Option<u32>,
        memo: &mut HashMap<(usize, usize), f64>,
    ) -> f64 {
        if i == j {
            return 1.0;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let v = match level(i, j) {
            None => 0.0,
            Some(1) => level1_oracle(&sets[i], &sets[j]),
            Some(m) => {
                let mut best = 0.0f64;
                for k in 0..sets.len() {
                    for p in 1..m {
                        let q = m - p;
                        if level(i, k) == Some(p) && level(k, j) == Some(q) {
                            let left = score(i, k, sets, level, memo);
                            let right = score(k, j, sets, level, memo);
                            let candidate = if m == 2 { left * right } else { left.max(right) };
                            best = best.max(candidate);
                        }
                    }
                }
                best
            }
        };
        memo.insert((i, j), v);
        v
    }

    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = score(i, j, sets, &level, &mut memo);
        }
    }
    out
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Mean silhouette straight from the definition: a(i) is the mean distance
/// to the own cluster, b(i) the smallest mean distance to another cluster,
/// singletons score 0.
pub fn silhouette_oracle(x: &Matrix, labels: &[usize]) -> f64 {
    let n = x.rows();
    let clusters: BTreeSet<usize> = labels.iter().copied().collect();
    let mut total = 0.0;
    for i in 0..n {
        let own: Vec<usize> = (0..n).filter(|&j| j != i && labels[j] == labels[i]).collect();
        if own.is_empty() {
            continue;
        }
        let a = own.iter().map(|&j| euclid(x.row(i), x.row(j))).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        for &c in &clusters {
            if c == labels[i] {
                continue;
            }
            let other: Vec<usize> = (0..n).filter(|&j| labels[j] == c).collect();
            let mean = other.iter().map(|&j| euclid(x.row(i), x.row(j))).sum::<f64>() / other.len() as f64;
            b = b.min(mean);
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}

/// Minimum bin count for `loads` by exhaustive search (small inputs only).
pub fn optimal_bins(loads: &[u64], capacity: u64) -> usize {
    fn place(i: usize, loads: &[u64], bins: &mut Vec<u64>, cap: u64, best: &mut usize) {
        if bins.len() >= *best {
            return;
        }
        if i == loads.len() {
            *best = bins.len();
            return;
        }
        for b in 0..bins.len() {
            if bins[b] + loads[i] <= cap {
                bins[b] += loads[i];
                place(i + 1, loads, bins, cap, best);
                bins[b] -= loads[i];
            }
        }
        bins.push(loads[i]);
        place(i + 1, loads, bins, cap, best);
        bins.pop();
    }
    let mut sorted = loads.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut best = usize::MAX;
    place(0, &sorted, &mut Vec::new(), capacity, &mut best);
    if loads.is_empty() {
        0
    } else {
        best
    }
}

/// Cluster labels are equal up to renaming.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    a.iter().zip(b).all(|(x, y)| {
        *fwd.entry(*x).or_insert(*y) == *y && *back.entry(*y).or_insert(*x) == *x
    })
}

/// Plain fuzzy c-means: centres seeded from `k` spread-out data points,
/// then the usual alternating updates until memberships settle.
pub fn reference_fcm(x: &Matrix, k: usize, m: f64) -> Vec<usize> {
    let n = x.rows();
    // Farthest-point seeding from row 0.
    let mut seeds = vec![0usize];
    while seeds.len() < k {
        let next = (0..n)
            .max_by(|&a, &b| {
                let da = seeds.iter().map(|&s| euclid(x.row(a), x.row(s))).fold(f64::INFINITY, f64::min);
                let db = seeds.iter().map(|&s| euclid(x.row(b), x.row(s))).fold(f64::INFINITY, f64::min);
                da.partial_cmp(&db).unwrap()
            })
            .unwrap();
        seeds.push(next);
    }
    let mut centers: Vec<Vec<f64>> = seeds.iter().map(|&s| x.row(s).to_vec()).collect();
    let mut u = vec![vec![0.0; k]; n];
    for _ in 0..1000 {
        let mut change: f64 = 0.0;
        for i in 0..n {
            let d: Vec<f64> = centers.iter().map(|c| euclid(x.row(i), c)).collect();
            for j in 0..k {
                let v = if d[j] == 0.0 {
                    1.0
                } else if d.iter().any(|&dl| dl == 0.0) {
                    0.0
                } else {
                    1.0 / d.iter().map(|&dl| (d[j] / dl).powf(2.0 / (m - 1.0))).sum::<f64>()
                };
                change = change.max((v - u[i][j]).abs());
                u[i][j] = v;
            }
        }
        for (j, c) in centers.iter_mut().enumerate() {
            let w: Vec<f64> = (0..n).map(|i| u[i][j].powf(m)).collect();
            let total: f64 = w.iter().sum();
            for (dim, value) in c.iter_mut().enumerate() {
                *value = (0..n).map(|i| w[i] * x.row(i)[dim]).sum::<f64>() / total;
            }
        }
        if change < 1e-9 {
            break;
        }
    }
    u.iter()
        .map(|row| {
            let mut best = 0;
            for j in 1..k {
                if row[j] > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Writes each generated document to `dir/<tag>.nt` and returns a config
/// reading them, with outputs and cache under `dir`.
pub fn config_for(dir: &std::path::Path, docs: &[(String, String)]) -> semcluster::config::RunConfig {
    let mut config = semcluster::config::RunConfig::default();
    std::fs::create_dir_all(dir.join("data")).unwrap();
    for (tag, doc) in docs {
        let path = dir.join("data").join(format!("{tag}.nt"));
        std::fs::write(&path, doc).unwrap();
        config.ingest.inputs.push(semcluster::config::InputSpec { path, dataset: None });
    }
    config.run.output_dir = dir.join("out");
    config.run.cache_dir = dir.join("cache");
    config
}
