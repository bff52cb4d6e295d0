//! Writes a generated corpus to disk and runs every stage through the
//! pipeline twice; the second run is served from the cache.
//!
//! cargo run --release --example pipeline_end_to_end [run-dir]

use semcluster::config::{InputSpec, RunConfig};
use semcluster::pipeline::{run, Target};
use semcluster::synthetic::{generate, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("semcluster-demo"), Into::into);
    std::fs::create_dir_all(dir.join("data"))?;

    let mut config = RunConfig::default();
    for (tag, doc) in generate(&CorpusSpec::five_domain(5)) {
        let path = dir.join("data").join(format!("{tag}.nt"));
        std::fs::write(&path, doc)?;
        config.ingest.inputs.push(InputSpec { path, dataset: None });
    }
    config.clustering.capacity = 200;
    config.run.output_dir = dir.join("run");
    config.run.cache_dir = dir.join("cache");

    for attempt in 1..=2 {
        let outcome = run(&config, Target::Report)?;
        println!("run {attempt}:");
        for s in &outcome.manifest.stages {
            println!("  {:<10} {:?} ({} ms)", s.stage.name(), s.status, s.millis);
        }
        let tree = outcome.tree.as_ref().expect("report runs clustering");
        println!("  clusters per level: {:?}", tree.clusters_per_level());
    }
    println!("outputs in {}", config.run.output_dir.display());
    Ok(())
}
