use super::ClusteringError;
use crate::matrix::{euclidean, Matrix};

/// Mean silhouette width of a hard clustering under Euclidean distance.
///
/// Points in singleton clusters contribute 0, as do points whose intra- and
/// nearest-cluster mean distances are both 0.
pub fn silhouette_width(features: &Matrix, labels: &[usize]) -> Result<f64, ClusteringError> {
    Ok(silhouette_samples(features, labels)?.iter().sum::<f64>() / labels.len() as f64)
}

/// Per-point silhouette values.
pub fn silhouette_samples(features: &Matrix, labels: &[usize]) -> Result<Vec<f64>, ClusteringError> {
    let n = features.rows();
    if labels.len() != n {
        return Err(ClusteringError::Parameter(format!(
            "{} labels for {} points",
            labels.len(),
            n
        )));
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(ClusteringError::Undefined(
            "silhouette needs at least two non-empty clusters".into(),
        ));
    }

    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(features.row(i), features.row(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut sums = vec![0.0; k];
    Ok((0..n)
        .map(|i| {
            let own = labels[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            sums.iter_mut().for_each(|s| *s = 0.0);
            for j in 0..n {
                sums[labels[j]] += dist[i * n + j];
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let denom = a.max(b);
            if denom == 0.0 {
                0.0
            } else {
                (b - a) / denom
            }
        })
        .collect())
}
