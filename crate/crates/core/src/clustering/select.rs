use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fcm::{fcm, harden, FcmParams, FcmResult};
use super::silhouette::silhouette_width;
use super::ClusteringError;
use crate::matrix::Matrix;

/// Outcome of one candidate cluster count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KDiagnostic {
    pub k: usize,
    /// `None` when the hardened labels use fewer than two clusters.
    pub silhouette: Option<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct Selection {
    pub best_k: usize,
    pub silhouette: f64,
    pub result: FcmResult,
    pub labels: Vec<usize>,
    pub diagnostics: Vec<KDiagnostic>,
}

/// Runs FCM for every `k` in `k_min..=k_max` and keeps the one with the
/// largest silhouette width. Ties go to the smaller `k`.
pub fn select_k(
    features: &Matrix,
    k_min: usize,
    k_max: usize,
    template: &FcmParams,
) -> Result<Selection, ClusteringError> {
    let n = features.rows();
    if k_min < 2 || k_min > k_max || k_max + 1 > n {
        return Err(ClusteringError::Parameter(format!(
            "k range [{k_min}, {k_max}] is invalid for {n} points"
        )));
    }
    let runs: Vec<(FcmResult, Vec<usize>, Option<f64>)> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            let result = fcm(features, &template.with_k(k))?;
            let labels = harden(&result.membership);
            let silhouette = match silhouette_width(features, &labels) {
                Ok(s) => Some(s),
                Err(ClusteringError::Undefined(_)) => None,
                Err(e) => return Err(e),
            };
            Ok((result, labels, silhouette))
        })
        .collect::<Result<_, ClusteringError>>()?;

    let diagnostics: Vec<KDiagnostic> = runs
        .iter()
        .zip(k_min..)
        .map(|((r, _, s), k)| KDiagnostic {
            k,
            silhouette: *s,
            objective: r.objective,
            iterations: r.iterations,
            converged: r.converged,
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (idx, (_, _, s)) in runs.iter().enumerate() {
        if let Some(s) = *s {
            if best.map_or(true, |(_, b)| s > b) {
                best = Some((idx, s));
            }
        }
    }
    let (idx, silhouette) = best.ok_or_else(|| {
        ClusteringError::Undefined("no cluster count produced two non-empty clusters".into())
    })?;
    let (result, labels, _) = runs.into_iter().nth(idx).expect("index in range");
    Ok(Selection {
        best_k: k_min + idx,
        silhouette,
        result,
        labels,
        diagnostics,
    })
}
