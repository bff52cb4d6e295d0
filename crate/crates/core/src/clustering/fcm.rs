use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ClusteringError;
use crate::matrix::{squared_distance, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FcmParams {
    pub k: usize,
    pub fuzziness: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Independent random starts; the run with the lowest objective wins.
    #[serde(default = "default_restarts")]
    pub restarts: usize,
}

fn default_restarts() -> usize {
    10
}

impl Default for FcmParams {
    fn default() -> Self {
        Self {
            k: 2,
            fuzziness: 2.0,
            tolerance: 1e-6,
            max_iterations: 300,
            seed: 0,
            restarts: default_restarts(),
        }
    }
}

impl FcmParams {
    pub fn with_k(&self, k: usize) -> Self {
        Self { k, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    fn validate(&self, n: usize) -> Result<(), ClusteringError> {
        if self.k < 2 {
            return Err(ClusteringError::Parameter(format!("k must be >= 2, got {}", self.k)));
        }
        if n < self.k {
            return Err(ClusteringError::Parameter(format!(
                "{} points cannot form {} clusters",
                n, self.k
            )));
        }
        if !(self.fuzziness > 1.0 && self.fuzziness.is_finite()) {
            return Err(ClusteringError::Parameter("fuzziness must be > 1".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(ClusteringError::Parameter("tolerance must be > 0".into()));
        }
        if self.max_iterations == 0 || self.restarts == 0 {
            return Err(ClusteringError::Parameter(
                "max_iterations and restarts must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// n×k soft assignment; each row sums to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipMatrix {
    k: usize,
    values: Vec<f64>,
}

impl MembershipMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let k = rows.first().map_or(0, Vec::len);
        Self {
            k,
            values: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn n(&self) -> usize {
        if self.k == 0 {
            0
        } else {
            self.values.len() / self.k
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.k..(i + 1) * self.k]
    }

    pub fn get(&self, i: usize, c: usize) -> f64 {
        self.values[i * self.k + c]
    }

    /// Largest deviation of any row sum from 1.
    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.n())
            .map(|i| (self.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Hard assignment: argmax per row, ties to the lowest cluster index.
pub fn harden(u: &MembershipMatrix) -> Vec<usize> {
    (0..u.n())
        .map(|i| {
            let row = u.row(i);
            let mut best = 0;
            for (c, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = c;
                }
            }
            best
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct FcmResult {
    pub centers: Matrix,
    pub membership: MembershipMatrix,
    /// Objective after the final center update.
    pub objective: f64,
    /// One objective value per iteration.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// State passed to an [`fcm_observed`] callback after every iteration.
pub struct IterationState<'a> {
    pub iteration: usize,
    pub objective: f64,
    pub membership: &'a MembershipMatrix,
    pub max_change: f64,
}

/// Standard fuzzy c-means on the rows of `features`, best of
/// `params.restarts` seeded starts.
///
/// Start 0 uses `params.seed`; later starts derive their seed from it.
/// Ties in the final objective go to the earlier start.
pub fn fcm(features: &Matrix, params: &FcmParams) -> Result<FcmResult, ClusteringError> {
    params.validate(features.rows())?;
    let runs: Vec<FcmResult> = (0..params.restarts)
        .into_par_iter()
        .map(|r| fcm_observed(features, &params.with_seed(restart_seed(params.seed, r)), |_| {}))
        .collect::<Result<_, _>>()?;
    let mut best: Option<FcmResult> = None;
    for run in runs {
        match &best {
            Some(b) if !(run.objective < b.objective) => {}
            _ => best = Some(run),
        }
    }
    Ok(best.expect("restarts is positive"))
}

/// Seed of the `r`-th restart.
pub fn restart_seed(seed: u64, r: usize) -> u64 {
    if r == 0 {
        seed
    } else {
        super::child_seed(seed ^ 0xf00d_cafe, r)
    }
}

/// A single fuzzy c-means run from `params.seed` (restarts are ignored),
/// with a callback invoked after each membership update.
///
/// Each iteration recomputes centers from the current memberships, records
/// the objective for that (membership, center) pair, then updates the
/// memberships. Both half-steps minimise the objective, so the recorded
/// sequence never increases.
pub fn fcm_observed<F>(
    features: &Matrix,
    params: &FcmParams,
    mut observe: F,
) -> Result<FcmResult, ClusteringError>
where
    F: FnMut(&IterationState<'_>),
{
    let n = features.rows();
    let d = features.cols();
    let k = params.k;
    params.validate(n)?;
    if d == 0 {
        return Err(ClusteringError::Parameter("features have no columns".into()));
    }
    if features.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(ClusteringError::NonFinite);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut u = MembershipMatrix {
        k,
        values: Vec::with_capacity(n * k),
    };
    for _ in 0..n {
        let row: Vec<f64> = (0..k).map(|_| rng.gen::<f64>() + f64::EPSILON).collect();
        let sum: f64 = row.iter().sum();
        u.values.extend(row.iter().map(|v| v / sum));
    }

    let m = params.fuzziness;
    let exponent = 2.0 / (m - 1.0);
    let mut centers = Matrix::zeros(k, d);
    let mut dist2 = vec![0.0; n * k];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < params.max_iterations {
        iterations += 1;
        update_centers(features, &u, m, &mut centers);

        // Rows are independent; per-row partials are reduced in row order
        // so results do not depend on the thread count.
        let partials: Vec<(f64, f64)> = dist2
            .par_chunks_mut(k)
            .zip(u.values.par_chunks_mut(k))
            .enumerate()
            .with_min_len(64)
            .map(|(i, (row_d2, row_u))| {
                let mut objective = 0.0;
                for c in 0..k {
                    let d2 = squared_distance(features.row(i), centers.row(c));
                    row_d2[c] = d2;
                    objective += row_u[c].powf(m) * d2;
                }
                let mut change: f64 = 0.0;
                for (dst, v) in row_u.iter_mut().zip(membership_row(row_d2, exponent)) {
                    change = change.max((v - *dst).abs());
                    *dst = v;
                }
                (objective, change)
            })
            .collect();
        let objective: f64 = partials.iter().map(|p| p.0).sum();
        let max_change = partials.iter().map(|p| p.1).fold(0.0, f64::max);
        trace.push(objective);

        observe(&IterationState {
            iteration: iterations,
            objective,
            membership: &u,
            max_change,
        });
        if max_change < params.tolerance {
            converged = true;
            break;
        }
    }

    let objective = *trace.last().unwrap_or(&0.0);
    Ok(FcmResult {
        centers,
        membership: u,
        objective,
        objective_trace: trace,
        iterations,
        converged,
    })
}

fn update_centers(features: &Matrix, u: &MembershipMatrix, m: f64, centers: &mut Matrix) {
    let k = u.k();
    for c in 0..k {
        let mut weight_sum = 0.0;
        let mut acc = vec![0.0; features.cols()];
        for i in 0..features.rows() {
            let w = u.get(i, c).powf(m);
            if w == 0.0 {
                continue;
            }
            weight_sum += w;
            for (a, x) in acc.iter_mut().zip(features.row(i)) {
                *a += w * x;
            }
        }
        if weight_sum > 0.0 {
            for (dst, a) in centers.row_mut(c).iter_mut().zip(acc) {
                *dst = a / weight_sum;
            }
        }
    }
}

/// Membership row from squared distances to each center. Points sitting on
/// one or more centers split their membership evenly among those centers.
fn membership_row(dist2: &[f64], exponent: f64) -> Vec<f64> {
    let zeros = dist2.iter().filter(|&&d| d == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        return dist2
            .iter()
            .map(|&d| if d == 0.0 { share } else { 0.0 })
            .collect();
    }
    // (d_c / d_l)^(2/(m-1)) with squared distances: exponent halves.
    let half = exponent / 2.0;
    let mut row: Vec<f64> = dist2
        .iter()
        .map(|&dc| {
            let s: f64 = dist2.iter().map(|&dl| (dc / dl).powf(half)).sum();
            1.0 / s
        })
        .collect();
    let sum: f64 = row.iter().sum();
    for v in &mut row {
        *v /= sum;
    }
    row
}
