use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semcluster::config::{InputSpec, RunConfig};
use semcluster::pipeline::{self, format_k_diagnostics, format_level_counts, RunOutcome, Target};
use semcluster::rdf::MalformedPolicy;

/// Semantic clustering of RDF predicates and capacity-aware partitioning.
#[derive(Parser)]
///
/// Flags override the config file, which overrides the built-in defaults
/// listed below.
#[command(name = "semcluster", version, after_help = defaults_help())]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Abort on the first malformed line instead of skipping it.
    #[arg(long, global = true)]
    strict: bool,
    /// N-Triples input, optionally `TAG=PATH`. Replaces configured inputs.
    #[arg(long = "input", short, global = true)]
    inputs: Vec<String>,
    #[arg(long, short, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    capacity: Option<u64>,
    #[arg(long, global = true)]
    k_min: Option<usize>,
    #[arg(long, global = true)]
    k_max: Option<usize>,
    #[arg(long, global = true)]
    lmax: Option<u32>,
    #[arg(long, global = true)]
    fuzziness: Option<f64>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
    /// Independent FCM starts per k; the lowest objective wins.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Rebuild similarity per node instead of slicing the root matrix.
    #[arg(long, global = true)]
    recompute_per_node: bool,
    /// Predicate IRI prefix to drop. Replaces the configured blocklist.
    #[arg(long = "block", global = true)]
    blocklist: Vec<String>,
    #[arg(long, global = true)]
    log_level: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Parse inputs and print corpus statistics.
    Stats,
    /// Build the predicate projection and neighbour levels.
    Graph,
    /// Compute the similarity matrix.
    Similarity,
    /// Run hierarchical clustering.
    Cluster,
    /// Cluster and write coverage and partition reports.
    Report,
    /// Run every stage and print a summary of each.
    Pipeline,
}

fn defaults_help() -> String {
    let defaults = toml::to_string(&RunConfig::default()).unwrap_or_default();
    format!("Defaults (config file form):\n\n{defaults}")
}

fn build_config(g: &Global) -> Result<RunConfig, semcluster::config::ConfigError> {
    let mut config = match &g.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if !g.inputs.is_empty() {
        config.ingest.inputs = g
            .inputs
            .iter()
            .map(|arg| match arg.split_once('=') {
                Some((tag, path)) if !tag.contains('/') => InputSpec {
                    path: path.into(),
                    dataset: Some(tag.to_owned()),
                },
                _ => InputSpec {
                    path: arg.into(),
                    dataset: None,
                },
            })
            .collect();
    }
    if g.strict {
        config.ingest.malformed_policy = MalformedPolicy::Strict;
    }
    if !g.blocklist.is_empty() {
        config.ingest.predicate_blocklist = g.blocklist.clone();
    }
    let c = &mut config.clustering;
    c.seed = g.seed.unwrap_or(c.seed);
    c.capacity = g.capacity.unwrap_or(c.capacity);
    c.k_min = g.k_min.unwrap_or(c.k_min);
    c.k_max = g.k_max.unwrap_or(c.k_max);
    c.fuzziness = g.fuzziness.unwrap_or(c.fuzziness);
    c.tolerance = g.tolerance.unwrap_or(c.tolerance);
    c.max_iterations = g.max_iterations.unwrap_or(c.max_iterations);
    c.restarts = g.restarts.unwrap_or(c.restarts);
    c.max_depth = g.max_depth.unwrap_or(c.max_depth);
    c.recompute_per_node |= g.recompute_per_node;
    config.graph.lmax = g.lmax.unwrap_or(config.graph.lmax);
    let r = &mut config.run;
    r.threads = g.threads.unwrap_or(r.threads);
    if let Some(dir) = &g.cache_dir {
        r.cache_dir = dir.clone();
    }
    if let Some(dir) = &g.out_dir {
        r.output_dir = dir.clone();
    }
    if let Some(level) = &g.log_level {
        r.log_level = level.clone();
    }
    config.validate()?;
    Ok(config)
}

fn summarize(command: Command, out: &RunOutcome) {
    let all = matches!(command, Command::Pipeline);
    if matches!(command, Command::Stats) || all {
        print!("{}", out.ingested.stats.to_table());
        let f = &out.ingested.filter;
        println!(
            "predicates after filtering: {} of {} ({} triples kept)",
            f.predicates_after, f.predicates_before, f.triples_after
        );
    }
    if let (Some(cm), true) = (&out.cm, matches!(command, Command::Similarity) || all) {
        println!("similarity matrix: {0}x{0}", cm.len());
    }
    if matches!(command, Command::Graph) || all {
        if let Some(index) = &out.index {
            println!("projection over {} predicates written", index.len());
        }
    }
    if let (Some(tree), true) = (&out.tree, matches!(command, Command::Cluster) || all) {
        print!("{}", format_k_diagnostics(tree));
        print!("{}", format_level_counts(tree));
    }
    if let (Some(cov), Some(plan)) = (&out.coverage, &out.plan) {
        if matches!(command, Command::Report) || all {
            for s in &cov.spread {
                println!(
                    "{}: {} predicates, {} triples across {} clusters",
                    s.dataset, s.predicates, s.triples, s.clusters
                );
            }
            println!(
                "{} leaves on {} machines (capacity {})",
                cov.clusters.len(),
                plan.machines.len(),
                plan.capacity
            );
        }
    }
    for stage in &out.manifest.stages {
        log::info!("{}: {:?} ({} ms)", stage.stage, stage.status, stage.millis);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: config: {e}");
            return ExitCode::from(2);
        }
    };
    env_logger::Builder::from_env(
        env_logger::Env::default().default_filter_or(config.run.log_level.as_str()),
    )
    .init();
    if config.run.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(config.run.threads)
            .build_global()
        {
            log::warn!("cannot size thread pool: {e}");
        }
    }
    let target = match cli.command {
        Command::Stats => Target::Stats,
        Command::Graph => Target::Graph,
        Command::Similarity => Target::Similarity,
        Command::Cluster => Target::Cluster,
        Command::Report | Command::Pipeline => Target::Report,
    };
    match pipeline::run(&config, target) {
        Ok(outcome) => {
            summarize(cli.command, &outcome);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
