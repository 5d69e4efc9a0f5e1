//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 1 internal error.
//! Progress goes to stderr; trees and reports go to stdout or files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::data::{load_csv, load_csv_with_manifest, make_folds, read_manifest, Dataset};
use crate::error::Error;
use crate::eval::{
    build_wtl, emit_report, run_experiment, AlgorithmSpec, NamedDataset, DEFAULT_ALPHA,
    DEFAULT_RESAMPLES,
};
use crate::genetic::{run_genesim, write_trace_csv, GaConfig};
use crate::induce::{induce_tree, Criterion, EnsembleConfig, InduceConfig};
use crate::seed;
use crate::space::{merge_regions, regions_to_tree, tree_to_regions};
use crate::tree::DecisionTree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "genesim", version, about = "Merge decision-tree ensembles into a single tree")]
pub struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, env = "GENESIM_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow one greedy tree on the whole dataset and print it as JSON.
    Induce(InduceArgs),
    /// Run the genetic merge on a stratified holdout split.
    Genesim(GenesimArgs),
    /// Run the cross-validation benchmark described by a JSON config.
    Benchmark(BenchmarkArgs),
    /// Merge two serialized trees and print the rebuilt tree.
    Merge(MergeArgs),
}

#[derive(Debug, Args)]
struct DataArgs {
    /// CSV file with a header row.
    #[arg(long)]
    data: PathBuf,
    /// Name of the class column.
    #[arg(long)]
    label: Option<String>,
    /// Optional JSON manifest with column kinds and the label flag.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InduceArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "gini")]
    criterion: String,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long, default_value_t = 2)]
    min_samples_leaf: usize,
    #[arg(long, default_value_t = 4)]
    min_samples_split: usize,
}

#[derive(Debug, Args)]
struct GenesimArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 32)]
    population_size: usize,
    #[arg(long, default_value_t = 20)]
    iterations: usize,
    #[arg(long, default_value_t = 3)]
    tournament_size: usize,
    #[arg(long, default_value_t = 32)]
    offspring: usize,
    #[arg(long, default_value_t = 0.1)]
    mutation_probability: f64,
    #[arg(long, default_value_t = 10)]
    bagging_rounds: usize,
    #[arg(long, default_value_t = 5)]
    boosting_rounds: usize,
    /// One of `holdout_folds` stratified folds is held out for testing.
    #[arg(long, default_value_t = 3)]
    holdout_folds: usize,
    /// Write the per-iteration trace CSV here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchmarkArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output directory.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Concurrent experiment cells.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct MergeArgs {
    first: PathBuf,
    second: PathBuf,
    /// Number of features of the space both trees live in.
    #[arg(long)]
    features: usize,
    /// Print the merged region set instead of the rebuilt tree.
    #[arg(long)]
    regions: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetEntry {
    pub name: String,
    pub csv: PathBuf,
    #[serde(default)]
    pub label: Option<String>,
    #[serde(default)]
    pub manifest: Option<PathBuf>,
}

fn default_folds() -> usize {
    3
}

fn default_repeats() -> usize {
    10
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

fn default_jobs() -> usize {
    1
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_resamples() -> usize {
    DEFAULT_RESAMPLES
}

/// Benchmark configuration. Relative paths resolve against the config
/// file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetEntry>,
    pub algorithms: Vec<AlgorithmSpec>,
    #[serde(default = "default_folds")]
    pub n_folds: usize,
    #[serde(default = "default_repeats")]
    pub n_repeats: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_resamples")]
    pub resamples: usize,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for d in &mut cfg.datasets {
            resolve(&mut d.csv);
            if let Some(m) = &mut d.manifest {
                resolve(m);
            }
        }
        resolve(&mut cfg.output);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.datasets.is_empty() {
            return Err(Error::config("config lists no datasets"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("config lists no algorithms"));
        }
        for d in &self.datasets {
            if !d.csv.is_file() {
                return Err(Error::config(format!(
                    "dataset '{}': file not found: {}",
                    d.name,
                    d.csv.display()
                )));
            }
            if let Some(m) = &d.manifest {
                if !m.is_file() {
                    return Err(Error::config(format!("manifest not found: {}", m.display())));
                }
            }
            if d.label.is_none() && d.manifest.is_none() {
                return Err(Error::config(format!(
                    "dataset '{}' needs a label column or a manifest",
                    d.name
                )));
            }
        }
        if self.n_folds < 2 || self.n_repeats < 1 {
            return Err(Error::config("need n_folds >= 2 and n_repeats >= 1"));
        }
        if self.resamples < 1 || !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::config("need resamples >= 1 and alpha in [0, 1]"));
        }
        for spec in &self.algorithms {
            use crate::eval::AlgorithmKind::*;
            match &spec.kind {
                SingleTree(c) => c.validate()?,
                BaggedCommittee(p) => p.tree.validate()?,
                BoostedCommittee(p) => p.tree.validate()?,
                Genesim(p) => {
                    p.ga.validate()?;
                    p.ensemble.validate()?;
                }
                Majority => {}
            }
        }
        Ok(())
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: e.to_string(),
        }
    }
}

fn load_data(args: &DataArgs) -> Result<Dataset, Failure> {
    if !args.data.is_file() {
        return Err(Failure::usage(format!(
            "data file not found: {}",
            args.data.display()
        )));
    }
    let loaded = match &args.manifest {
        Some(m) => read_manifest(m)
            .and_then(|man| load_csv_with_manifest(&args.data, args.label.as_deref(), &man)),
        None => match &args.label {
            Some(label) => load_csv(&args.data, label, None),
            None => Err(Error::config("--label or --manifest is required")),
        },
    };
    loaded.map_err(|e| Failure::usage(format!("{}: {e}", args.data.display())))
}

fn cmd_induce(args: InduceArgs, seed: u64) -> Result<(), Failure> {
    let criterion: Criterion = args.criterion.parse().map_err(Failure::usage)?;
    let config = InduceConfig {
        criterion,
        max_depth: args.max_depth,
        min_samples_leaf: args.min_samples_leaf,
        min_samples_split: args.min_samples_split,
        seed,
    };
    config.validate().map_err(Failure::usage)?;
    let dataset = load_data(&args.data)?;
    let all = dataset.all_indices();
    let tree = induce_tree(&dataset, &all, &config).map_err(Failure::internal)?;
    let accuracy = tree.accuracy(&dataset, &all).map_err(Failure::internal)?;
    println!("{}", tree.serialize());
    eprintln!(
        "node_count={} training_accuracy={accuracy}",
        tree.node_count()
    );
    Ok(())
}

fn cmd_genesim(args: GenesimArgs, seed: u64) -> Result<(), Failure> {
    let ga = GaConfig {
        population_size: args.population_size,
        iterations: args.iterations,
        tournament_size: args.tournament_size,
        offspring_per_iteration: args.offspring,
        mutation_probability: args.mutation_probability,
        seed,
    };
    ga.validate().map_err(Failure::usage)?;
    let ensemble = EnsembleConfig {
        bagging_rounds: args.bagging_rounds,
        boosting_rounds: args.boosting_rounds,
        ..Default::default()
    };
    ensemble.validate().map_err(Failure::usage)?;
    let dataset = load_data(&args.data)?;
    let plan = make_folds(&dataset, args.holdout_folds, 1, seed::derive(seed, &[7]))
        .map_err(Failure::usage)?;
    let train = plan.train_indices(0, 0);
    let test = plan.test_indices(0, 0);
    let run = run_genesim(&dataset, &train, &ga, &ensemble).map_err(Failure::internal)?;
    let holdout = run.tree.accuracy(&dataset, &test).map_err(Failure::internal)?;
    if let Some(path) = &args.trace {
        let file = fs::File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        write_trace_csv(&run.trace, std::io::BufWriter::new(file)).map_err(Failure::internal)?;
    }
    println!("{}", run.tree.serialize());
    eprintln!(
        "node_count={} validation_accuracy={} holdout_accuracy={holdout}",
        run.tree.node_count(),
        run.fitness.accuracy
    );
    Ok(())
}

fn cmd_benchmark(args: BenchmarkArgs, seed: Option<u64>) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::load(&args.config).map_err(Failure::usage)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(j) = args.jobs {
        cfg.jobs = j;
    }
    if let Some(o) = args.output {
        cfg.output = o;
    }
    cfg.validate().map_err(Failure::usage)?;
    let mut datasets = Vec::with_capacity(cfg.datasets.len());
    for entry in &cfg.datasets {
        let loaded = match &entry.manifest {
            Some(m) => read_manifest(m)
                .and_then(|man| load_csv_with_manifest(&entry.csv, entry.label.as_deref(), &man)),
            None => load_csv(&entry.csv, entry.label.as_deref().unwrap_or_default(), None),
        };
        let dataset = loaded.map_err(|e| Failure::usage(format!("dataset '{}': {e}", entry.name)))?;
        make_folds(&dataset, cfg.n_folds, 1, 0)
            .map_err(|e| Failure::usage(format!("dataset '{}': {e}", entry.name)))?;
        datasets.push(NamedDataset {
            name: entry.name.clone(),
            dataset,
        });
    }
    let total = datasets.len() * cfg.algorithms.len();
    let mut done = 0;
    let report = run_experiment(
        &datasets,
        &cfg.algorithms,
        cfg.n_folds,
        cfg.n_repeats,
        cfg.seed,
        cfg.jobs,
        |cell| {
            done += 1;
            match &cell.error {
                None => eprintln!(
                    "[{done}/{total}] {} / {}: accuracy {:.4} ± {:.4}, complexity {:.2}",
                    cell.dataset, cell.algorithm, cell.accuracy.mean, cell.accuracy.std, cell.complexity.mean
                ),
                Some(e) => eprintln!("[{done}/{total}] {} / {}: failed: {e}", cell.dataset, cell.algorithm),
            }
        },
    )
    .map_err(Failure::internal)?;
    let wtl = build_wtl(&report, cfg.alpha, cfg.resamples).map_err(Failure::internal)?;
    let files = emit_report(&report, &wtl, &cfg.output).map_err(Failure::internal)?;
    for f in files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}

fn read_tree(path: &Path) -> Result<DecisionTree, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    DecisionTree::deserialize(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn cmd_merge(args: MergeArgs, seed: u64) -> Result<(), Failure> {
    let a = read_tree(&args.first)?;
    let b = read_tree(&args.second)?;
    let ra = tree_to_regions(&a, args.features).map_err(Failure::usage)?;
    let rb = tree_to_regions(&b, args.features).map_err(Failure::usage)?;
    let merged = merge_regions(&ra, &rb).map_err(Failure::usage)?;
    if args.regions {
        println!("{}", merged.to_json());
        return Ok(());
    }
    let tree = regions_to_tree(&merged, &mut seed::rng(seed)).map_err(Failure::internal)?;
    println!("{}", tree.serialize());
    eprintln!(
        "regions={} node_count={}",
        merged.len(),
        tree.node_count()
    );
    Ok(())
}

/// Parses `args` and runs the chosen subcommand, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let seed = cli.seed.unwrap_or(0);
    let outcome = match cli.command {
        Command::Induce(a) => cmd_induce(a, seed),
        Command::Genesim(a) => cmd_genesim(a, seed),
        Command::Benchmark(a) => cmd_benchmark(a, cli.seed),
        Command::Merge(a) => cmd_merge(a, seed),
    };
    let _ = std::io::stdout().flush();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
