//! Fuzzy c-means on Gaussian blobs, with the cluster count picked by
//! silhouette width.

use semcluster::clustering::{fcm_observed, select_k, FcmParams};
use semcluster::synthetic::gaussian_blobs;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let centers = vec![vec![0.0, 0.0], vec![6.0, 0.0], vec![3.0, 5.0]];
    let (points, _) = gaussian_blobs(&centers, 40, 0.6, 11);

    let params = FcmParams::default().with_k(3).with_seed(11);
    let run = fcm_observed(&points, &params, |s| {
        if s.iteration <= 5 || s.max_change < 1e-5 {
            println!(
                "iter {:>3}  J = {:>10.4}  max change {:.2e}",
                s.iteration, s.objective, s.max_change
            );
        }
    })?;
    println!("converged: {} after {} iterations", run.converged, run.iterations);
    for c in 0..run.centers.rows() {
        println!("center {c}: {:.3?}", run.centers.row(c));
    }

    let selection = select_k(&points, 2, 6, &params)?;
    for d in &selection.diagnostics {
        println!("k = {}  silhouette {:?}", d.k, d.silhouette);
    }
    println!("chosen k = {} (silhouette {:.4})", selection.best_k, selection.silhouette);
    Ok(())
}
