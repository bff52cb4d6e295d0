//! Generated corpora and feature sets for examples, tests and benchmarks.
//!
//! Corpora are built from *domains* split into *subdomains*. Every
//! predicate draws its subjects and objects from its subdomain's private
//! entity pool, or, with probability `bridge`, from a pool shared by the
//! whole domain. Domains never share entities, so predicates of different
//! domains end up unreachable from each other in the projection graph.

use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::matrix::Matrix;
use crate::rdf::{RDFS_NS, RDF_TYPE};

pub const BASE: &str = "http://example.org/";

#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub name: String,
    /// Predicate count of each subdomain.
    pub subdomains: Vec<usize>,
}

impl DomainSpec {
    pub fn new(name: &str, subdomains: &[usize]) -> Self {
        Self {
            name: name.to_owned(),
            subdomains: subdomains.to_vec(),
        }
    }

    pub fn predicate_count(&self) -> usize {
        self.subdomains.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub domains: Vec<DomainSpec>,
    pub triples_per_predicate: usize,
    pub subdomain_entities: usize,
    pub bridge_entities: usize,
    /// Probability that an endpoint comes from the domain-wide pool.
    pub bridge: f64,
    /// Emit `rdf:type` and `rdfs:label` triples alongside the data.
    pub builtin_triples: bool,
    pub seed: u64,
}

impl CorpusSpec {
    /// Two disconnected families of `per_family` predicates each.
    pub fn two_domain(per_family: usize, triples_per_predicate: usize, seed: u64) -> Self {
        Self {
            domains: vec![
                DomainSpec::new("alpha", &[per_family]),
                DomainSpec::new("beta", &[per_family]),
            ],
            triples_per_predicate,
            subdomain_entities: 60,
            bridge_entities: 0,
            bridge: 0.0,
            builtin_triples: true,
            seed,
        }
    }

    /// Five domains, two of which are made of 2 and 4 subdomains, giving
    /// nine subdomains in total.
    pub fn five_domain(seed: u64) -> Self {
        Self {
            domains: vec![
                DomainSpec::new("d1", &[4]),
                DomainSpec::new("d2", &[4, 4]),
                DomainSpec::new("d3", &[4, 4, 4, 4]),
                DomainSpec::new("d4", &[4]),
                DomainSpec::new("d5", &[4]),
            ],
            triples_per_predicate: 40,
            subdomain_entities: 10,
            bridge_entities: 30,
            bridge: 0.8,
            builtin_triples: true,
            seed,
        }
    }

    pub fn predicate_count(&self) -> usize {
        self.domains.iter().map(DomainSpec::predicate_count).sum()
    }

    /// Load of one subdomain, excluding built-in triples.
    pub fn subdomain_load(&self, predicates: usize) -> u64 {
        (predicates * self.triples_per_predicate) as u64
    }
}

/// Predicate IRI for a (domain, subdomain, index) triple.
pub fn predicate_iri(domain: &str, sub: usize, i: usize) -> String {
    format!("{BASE}{domain}/s{sub}/p{i:02}")
}

/// One N-Triples document per domain, tagged with the domain name.
///
/// Each generated predicate carries `triples_per_predicate` distinct
/// triples; built-in triples come on top.
pub fn generate(spec: &CorpusSpec) -> Vec<(String, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut docs = Vec::new();
    for domain in &spec.domains {
        let mut doc = String::new();
        let bridge_pool: Vec<String> = (0..spec.bridge_entities)
            .map(|i| format!("{BASE}{}/bridge/e{i}", domain.name))
            .collect();
        for (s, &count) in domain.subdomains.iter().enumerate() {
            let pool: Vec<String> = (0..spec.subdomain_entities)
                .map(|i| format!("{BASE}{}/s{s}/e{i}", domain.name))
                .collect();
            for p in 0..count {
                let pred = predicate_iri(&domain.name, s, p);
                let mut seen = std::collections::HashSet::new();
                let mut emitted = 0;
                let mut attempts = 0;
                while emitted < spec.triples_per_predicate {
                    let pick = |rng: &mut ChaCha8Rng| {
                        if !bridge_pool.is_empty() && rng.gen_bool(spec.bridge) {
                            bridge_pool.choose(rng).unwrap()
                        } else {
                            pool.choose(rng).unwrap()
                        }
                    };
                    let subject = pick(&mut rng);
                    let object = pick(&mut rng);
                    attempts += 1;
                    assert!(attempts < 1_000_000, "entity pools too small for {pred}");
                    if seen.insert((subject.as_str(), object.as_str())) {
                        doc.push_str(&format!("<{subject}> <{pred}> <{object}> .\n"));
                        emitted += 1;
                    }
                }
            }
            if spec.builtin_triples {
                let class = format!("{BASE}{}/Class{s}", domain.name);
                for e in &pool {
                    doc.push_str(&format!("<{e}> <{RDF_TYPE}> <{class}> .\n"));
                }
                doc.push_str(&format!(
                    "<{class}> <{RDFS_NS}label> \"{} subdomain {s}\" .\n",
                    domain.name
                ));
            }
        }
        docs.push((domain.name.clone(), doc));
    }
    docs
}

/// Writes `lines` N-Triples lines. With `distinct`, every line introduces
/// fresh subject and object terms; otherwise lines cycle through a small
/// fixed vocabulary.
pub fn write_scale_file<W: Write>(mut out: W, lines: usize, distinct: bool) -> io::Result<()> {
    for i in 0..lines {
        if distinct {
            writeln!(
                out,
                "<{BASE}s/{i}> <{BASE}p/{}> \"value {i}\" .",
                i % 16
            )?;
        } else {
            writeln!(
                out,
                "<{BASE}s/{}> <{BASE}p/{}> <{BASE}o/{}> .",
                i % 97,
                i % 16,
                i % 89
            )?;
        }
    }
    Ok(())
}

/// Isotropic Gaussian blobs around `centers`. Returns the points and the
/// generating blob of each.
pub fn gaussian_blobs(
    centers: &[Vec<f64>],
    per_blob: usize,
    sd: f64,
    seed: u64,
) -> (Matrix, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sd).expect("standard deviation must be finite and >= 0");
    let mut rows = Vec::with_capacity(centers.len() * per_blob);
    let mut labels = Vec::with_capacity(rows.capacity());
    for (b, c) in centers.iter().enumerate() {
        for _ in 0..per_blob {
            rows.push(c.iter().map(|x| x + noise.sample(&mut rng)).collect::<Vec<f64>>());
            labels.push(b);
        }
    }
    (Matrix::from_rows(&rows), labels)
}

/// `k` random centres in `[-span, span]^dim`.
pub fn random_centers(k: usize, dim: usize, span: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| (0..dim).map(|_| rng.gen_range(-span..=span)).collect())
        .collect()
}

/// Random predicate entity sets: `predicates` sets over `entities`
/// candidate ids, each non-empty.
pub fn random_entity_sets<R: Rng>(rng: &mut R, predicates: usize, entities: u32) -> Vec<Vec<u32>> {
    (0..predicates)
        .map(|_| {
            let size = rng.gen_range(1..=entities.max(1) as usize);
            let mut all: Vec<u32> = (0..entities.max(1)).collect();
            all.shuffle(rng);
            all.truncate(size.min(entities.max(1) as usize));
            all.sort_unstable();
            all
        })
        .collect()
}
