//! Schema-driven partitioning of RDF predicates across machines.
//!
//! Predicates from one or more N-Triples datasets are compared through the
//! entities they share, clustered with a capacity-bounded hierarchical
//! fuzzy c-means, and the resulting leaf clusters are packed onto machines.
//!
//! The typical flow is [`rdf`] → [`schema`] → [`similarity`] →
//! [`clustering`] → [`analytics`]; [`pipeline`] runs all of it from a
//! [`config::RunConfig`] with on-disk caching.

pub mod analytics;
pub mod clustering;
pub mod config;
pub mod matrix;
pub mod pipeline;
pub mod rdf;
pub mod schema;
pub mod similarity;
pub mod synthetic;
