//! Fuzzy c-means, silhouette validation, cluster-count selection and the
//! capacity-driven hierarchical driver.

mod fcm;
mod hfcm;
mod select;
mod silhouette;

use thiserror::Error;

pub use fcm::{fcm, fcm_observed, harden, restart_seed, FcmParams, FcmResult, IterationState, MembershipMatrix};
pub use hfcm::{
    child_seed, hfcm, hfcm_with, ClusterNode, ClusterTree, FeatureSource, HfcmConfig, LeafReason,
};
pub use select::{select_k, KDiagnostic, Selection};
pub use silhouette::{silhouette_samples, silhouette_width};

#[derive(Debug, Error)]
pub enum ClusteringError {
    #[error("invalid clustering parameters: {0}")]
    Parameter(String),
    #[error("features contain non-finite values")]
    NonFinite,
    #[error("undefined result: {0}")]
    Undefined(String),
    #[error("feature source failed: {0}")]
    Features(String),
}
