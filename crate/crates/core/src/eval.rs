//! Repeated stratified cross-validation across algorithms, the paired
//! bootstrap test, Win-Tie-Loss matrices and report files.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{make_folds, Dataset, FoldPlan};
use crate::error::{Error, Result};
use crate::genetic::{run_genesim, GaConfig};
use crate::induce::{bag, boost_run, induce_tree, EnsembleConfig, InduceConfig};
use crate::seed;
use crate::tree::{argmax, DecisionTree};

pub const DEFAULT_RESAMPLES: usize = 10_000;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaggingParams {
    pub tree: InduceConfig,
    pub rounds: usize,
}

impl Default for BaggingParams {
    fn default() -> Self {
        BaggingParams {
            tree: InduceConfig::default(),
            rounds: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoostingParams {
    pub tree: InduceConfig,
    pub rounds: usize,
    pub max_depth: usize,
}

impl Default for BoostingParams {
    fn default() -> Self {
        BoostingParams {
            tree: InduceConfig::default(),
            rounds: 10,
            max_depth: 3,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenesimParams {
    pub ga: GaConfig,
    pub ensemble: EnsembleConfig,
}

/// `parameters` may be omitted, which selects the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    content = "parameters",
    rename_all = "snake_case",
    try_from = "RawKind"
)]
pub enum AlgorithmKind {
    SingleTree(InduceConfig),
    BaggedCommittee(BaggingParams),
    BoostedCommittee(BoostingParams),
    Genesim(GenesimParams),
    /// Always predicts the most frequent training class.
    Majority,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKind {
    kind: String,
    #[serde(default)]
    parameters: Option<serde_json::Value>,
}

impl TryFrom<RawKind> for AlgorithmKind {
    type Error = String;

    fn try_from(raw: RawKind) -> std::result::Result<Self, String> {
        fn params<T: serde::de::DeserializeOwned + Default>(
            v: Option<serde_json::Value>,
        ) -> std::result::Result<T, String> {
            match v {
                None => Ok(T::default()),
                Some(v) => serde_json::from_value(v).map_err(|e| e.to_string()),
            }
        }
        Ok(match raw.kind.as_str() {
            "single_tree" => AlgorithmKind::SingleTree(params(raw.parameters)?),
            "bagged_committee" => AlgorithmKind::BaggedCommittee(params(raw.parameters)?),
            "boosted_committee" => AlgorithmKind::BoostedCommittee(params(raw.parameters)?),
            "genesim" => AlgorithmKind::Genesim(params(raw.parameters)?),
            "majority" => match raw.parameters {
                None | Some(serde_json::Value::Null) => AlgorithmKind::Majority,
                Some(serde_json::Value::Object(m)) if m.is_empty() => AlgorithmKind::Majority,
                Some(_) => return Err("majority takes no parameters".into()),
            },
            other => {
                return Err(format!(
                    "unknown algorithm kind '{other}' (expected single_tree, bagged_committee, \
                     boosted_committee, genesim or majority)"
                ))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: AlgorithmKind,
}

impl AlgorithmSpec {
    pub fn new(name: impl Into<String>, kind: AlgorithmKind) -> Self {
        AlgorithmSpec {
            name: name.into(),
            kind,
        }
    }
}

/// A trained model as seen by the evaluation protocol.
#[derive(Debug, Clone)]
pub enum Model {
    Tree(DecisionTree),
    /// Averages member leaf distributions.
    Bagged(Vec<DecisionTree>),
    /// Weighted vote of member predictions.
    Boosted(Vec<(DecisionTree, f64)>),
}

impl Model {
    pub fn predict(&self, row: &[f64]) -> usize {
        match self {
            Model::Tree(t) => t.predict_unchecked(row),
            Model::Bagged(trees) => {
                let mut acc = vec![0.0; trees[0].n_classes()];
                for t in trees {
                    for (a, p) in acc.iter_mut().zip(t.distribution(row)) {
                        *a += p;
                    }
                }
                argmax(&acc)
            }
            Model::Boosted(members) => {
                let mut votes = vec![0.0; members[0].0.n_classes()];
                for (t, w) in members {
                    votes[t.predict_unchecked(row)] += w;
                }
                argmax(&votes)
            }
        }
    }

    /// Node count for a single tree, number of trees for a committee.
    pub fn complexity(&self) -> usize {
        match self {
            Model::Tree(t) => t.node_count(),
            Model::Bagged(trees) => trees.len(),
            Model::Boosted(members) => members.len(),
        }
    }

    pub fn accuracy(&self, dataset: &Dataset, indices: &[usize]) -> Result<f64> {
        if indices.is_empty() {
            return Err(Error::validation("accuracy over an empty index list"));
        }
        let correct = indices
            .iter()
            .filter(|&&i| self.predict(&dataset.rows[i]) == dataset.labels[i])
            .count();
        Ok(correct as f64 / indices.len() as f64)
    }
}

/// Trains `kind` on `train`. `seed` replaces every seed in the parameters.
pub fn train(kind: &AlgorithmKind, dataset: &Dataset, train: &[usize], seed: u64) -> Result<Model> {
    match kind {
        AlgorithmKind::SingleTree(cfg) => {
            let cfg = InduceConfig { seed, ..*cfg };
            Ok(Model::Tree(induce_tree(dataset, train, &cfg)?))
        }
        AlgorithmKind::BaggedCommittee(p) => {
            Ok(Model::Bagged(bag(dataset, train, &p.tree, p.rounds, seed)?))
        }
        AlgorithmKind::BoostedCommittee(p) => {
            let run = boost_run(dataset, train, &p.tree, p.rounds, p.max_depth, seed)?;
            Ok(Model::Boosted(
                run.members.into_iter().map(|m| (m.tree, m.vote)).collect(),
            ))
        }
        AlgorithmKind::Genesim(p) => {
            let ga = GaConfig { seed, ..p.ga.clone() };
            let ensemble = EnsembleConfig {
                seed: 0,
                ..p.ensemble.clone()
            };
            Ok(Model::Tree(run_genesim(dataset, train, &ga, &ensemble)?.tree))
        }
        AlgorithmKind::Majority => {
            if train.is_empty() {
                return Err(Error::validation("cannot train on zero samples"));
            }
            let mut counts = vec![0.0; dataset.n_classes()];
            for &i in train {
                counts[dataset.labels[i]] += 1.0;
            }
            let total = train.len() as f64;
            let dist = counts.into_iter().map(|c| c / total).collect();
            Ok(Model::Tree(DecisionTree::leaf(dist)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (n - 1); 0 for a single value.
    pub std: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        if values.is_empty() {
            return Summary { mean: 0.0, std: 0.0 };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Summary { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub dataset: String,
    pub algorithm: String,
    /// One fold-averaged value per repeat.
    pub accuracies: Vec<f64>,
    pub complexities: Vec<f64>,
    pub accuracy: Summary,
    pub complexity: Summary,
    pub fold_fingerprint: u64,
    pub error: Option<String>,
}

impl CellReport {
    pub fn is_complete(&self) -> bool {
        self.error.is_none() && !self.accuracies.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub n_folds: usize,
    pub n_repeats: usize,
    pub seed: u64,
    pub datasets: Vec<String>,
    pub algorithms: Vec<String>,
    /// Dataset-major, algorithm-minor.
    pub cells: Vec<CellReport>,
}

impl ExperimentReport {
    pub fn cell(&self, dataset: &str, algorithm: &str) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.algorithm == algorithm)
    }
}

pub struct NamedDataset {
    pub name: String,
    pub dataset: Dataset,
}

struct FoldOutcome {
    accuracy: f64,
    complexity: f64,
}

/// Runs every algorithm on every dataset with `n_repeats` × `n_folds`
/// stratified cross-validation. All algorithms see the same fold plan for a
/// dataset. `jobs` caps worker threads; `on_cell` is called once per
/// finished (dataset, algorithm) cell, in report order.
pub fn run_experiment(
    datasets: &[NamedDataset],
    algorithms: &[AlgorithmSpec],
    n_folds: usize,
    n_repeats: usize,
    seed: u64,
    jobs: usize,
    mut on_cell: impl FnMut(&CellReport),
) -> Result<ExperimentReport> {
    if datasets.is_empty() || algorithms.is_empty() {
        return Err(Error::config("need at least one dataset and one algorithm"));
    }
    let mut names: Vec<&str> = algorithms.iter().map(|a| a.name.as_str()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::config("algorithm names must be unique"));
    }
    let plans: Vec<FoldPlan> = datasets
        .iter()
        .enumerate()
        .map(|(d, nd)| make_folds(&nd.dataset, n_folds, n_repeats, seed::derive(seed, &[d as u64])))
        .collect::<Result<_>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::config(e.to_string()))?;

    let jobs_list: Vec<(usize, usize, usize, usize)> = (0..datasets.len())
        .flat_map(|d| {
            (0..algorithms.len()).flat_map(move |a| {
                (0..n_repeats).flat_map(move |r| (0..n_folds).map(move |f| (d, a, r, f)))
            })
        })
        .collect();

    let outcomes: Vec<Result<FoldOutcome>> = pool.install(|| {
        jobs_list
            .par_iter()
            .map(|&(d, a, r, f)| {
                let ds = &datasets[d].dataset;
                let plan = &plans[d];
                let train_idx = plan.train_indices(r, f);
                let test_idx = plan.test_indices(r, f);
                let fold_seed = seed::derive(seed, &[d as u64, r as u64, f as u64]);
                let model = train(&algorithms[a].kind, ds, &train_idx, fold_seed)?;
                Ok(FoldOutcome {
                    accuracy: model.accuracy(ds, &test_idx)?,
                    complexity: model.complexity() as f64,
                })
            })
            .collect()
    });

    let mut outcomes = outcomes.into_iter();
    let mut cells = Vec::with_capacity(datasets.len() * algorithms.len());
    for (d, nd) in datasets.iter().enumerate() {
        for alg in algorithms {
            let mut accuracies = Vec::with_capacity(n_repeats);
            let mut complexities = Vec::with_capacity(n_repeats);
            let mut error = None;
            for _ in 0..n_repeats {
                let mut acc = 0.0;
                let mut cx = 0.0;
                for _ in 0..n_folds {
                    match outcomes.next().expect("one outcome per job") {
                        Ok(o) => {
                            acc += o.accuracy;
                            cx += o.complexity;
                        }
                        Err(e) => {
                            error.get_or_insert_with(|| e.to_string());
                        }
                    }
                }
                accuracies.push(acc / n_folds as f64);
                complexities.push(cx / n_folds as f64);
            }
            if error.is_some() {
                accuracies.clear();
                complexities.clear();
            }
            let cell = CellReport {
                dataset: nd.name.clone(),
                algorithm: alg.name.clone(),
                accuracy: Summary::of(&accuracies),
                complexity: Summary::of(&complexities),
                accuracies,
                complexities,
                fold_fingerprint: plans[d].fingerprint(),
                error,
            };
            on_cell(&cell);
            cells.push(cell);
        }
    }
    Ok(ExperimentReport {
        n_folds,
        n_repeats,
        seed,
        datasets: datasets.iter().map(|d| d.name.clone()).collect(),
        algorithms: algorithms.iter().map(|a| a.name.clone()).collect(),
        cells,
    })
}

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let s = Summary::of(values);
    (s.mean, s.std)
}

/// Two-sided paired bootstrap test on `d_i = x_i - y_i`.
///
/// The statistic is the studentised mean `mean(d) / (sd(d) / sqrt(n))`. Its
/// null distribution comes from resampling the centred differences
/// `d_i - mean(d)` with replacement; the p-value is the share of resampled
/// `|t*|` at least as large as the observed `|t|`, with the usual `+1`
/// correction. All-zero differences give exactly 1.
pub fn bootstrap_p(xs: &[f64], ys: &[f64], resamples: usize, seed: u64) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::validation(format!(
            "paired samples differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::validation("need at least 2 paired measurements"));
    }
    if resamples == 0 {
        return Err(Error::validation("need at least one resample"));
    }
    let diffs: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x - y).collect();
    if diffs.iter().all(|&d| d == 0.0) {
        return Ok(1.0);
    }
    let n = diffs.len();
    let root_n = (n as f64).sqrt();
    let studentise = |mean: f64, sd: f64| -> f64 {
        if sd > 0.0 {
            mean / sd * root_n
        } else if mean == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(mean)
        }
    };
    let (mean, sd) = mean_and_sd(&diffs);
    let observed = studentise(mean, sd).abs();
    let centred: Vec<f64> = diffs.iter().map(|d| d - mean).collect();
    let mut rng = seed::rng(seed);
    let mut sample = vec![0.0; n];
    let mut extreme = 0usize;
    for _ in 0..resamples {
        for s in sample.iter_mut() {
            *s = centred[rng.gen_range(0..n)];
        }
        let (m, s) = mean_and_sd(&sample);
        if studentise(m, s).abs() >= observed {
            extreme += 1;
        }
    }
    Ok(((extreme + 1) as f64 / (resamples + 1) as f64).min(1.0))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wtl {
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WtlMatrix {
    pub algorithms: Vec<String>,
    /// `cells[a][b]` counts datasets where `a` wins, ties, loses against `b`.
    pub cells: Vec<Vec<Wtl>>,
    pub alpha: f64,
    /// `dataset: A vs B` entries counted as ties because a cell was missing.
    pub flagged: Vec<String>,
}

impl WtlMatrix {
    pub fn get(&self, a: &str, b: &str) -> Option<Wtl> {
        let i = self.algorithms.iter().position(|x| x == a)?;
        let j = self.algorithms.iter().position(|x| x == b)?;
        Some(self.cells[i][j])
    }
}

/// Per dataset and pair, `A` wins when its mean accuracy is higher and the
/// paired bootstrap p-value is below `alpha`.
pub fn build_wtl(report: &ExperimentReport, alpha: f64, resamples: usize) -> Result<WtlMatrix> {
    let m = report.algorithms.len();
    let mut cells = vec![vec![Wtl::default(); m]; m];
    let mut flagged = Vec::new();
    for (d, ds) in report.datasets.iter().enumerate() {
        for i in 0..m {
            cells[i][i].ties += 1;
            for j in i + 1..m {
                let a = report.cell(ds, &report.algorithms[i]);
                let b = report.cell(ds, &report.algorithms[j]);
                let outcome = match (a, b) {
                    (Some(a), Some(b))
                        if a.is_complete()
                            && b.is_complete()
                            && a.accuracies.len() == b.accuracies.len() =>
                    {
                        let p = bootstrap_p(
                            &a.accuracies,
                            &b.accuracies,
                            resamples,
                            seed::derive(report.seed, &[d as u64, i as u64, j as u64]),
                        )?;
                        if p < alpha && a.accuracy.mean > b.accuracy.mean {
                            Some(true)
                        } else if p < alpha && b.accuracy.mean > a.accuracy.mean {
                            Some(false)
                        } else {
                            None
                        }
                    }
                    _ => {
                        flagged.push(format!(
                            "{ds}: {} vs {}",
                            report.algorithms[i], report.algorithms[j]
                        ));
                        None
                    }
                };
                match outcome {
                    Some(true) => {
                        cells[i][j].wins += 1;
                        cells[j][i].losses += 1;
                    }
                    Some(false) => {
                        cells[i][j].losses += 1;
                        cells[j][i].wins += 1;
                    }
                    None => {
                        cells[i][j].ties += 1;
                        cells[j][i].ties += 1;
                    }
                }
            }
        }
    }
    Ok(WtlMatrix {
        algorithms: report.algorithms.clone(),
        cells,
        alpha,
        flagged,
    })
}

#[derive(Serialize)]
struct ResultsDocument<'a> {
    report: &'a ExperimentReport,
    wtl: &'a WtlMatrix,
}

fn summary_table(report: &ExperimentReport, pick: impl Fn(&CellReport) -> Summary) -> String {
    let mut out = String::from("dataset");
    for a in &report.algorithms {
        out.push(',');
        out.push_str(&csv_field(a));
    }
    out.push('\n');
    for ds in &report.datasets {
        out.push_str(&csv_field(ds));
        for a in &report.algorithms {
            out.push(',');
            match report.cell(ds, a).filter(|c| c.is_complete()) {
                Some(c) => {
                    let s = pick(c);
                    out.push_str(&format!("{}±{}", s.mean, s.std));
                }
                None => out.push_str("NA"),
            }
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn wtl_table(wtl: &WtlMatrix) -> String {
    let mut out = String::from("algorithm");
    for a in &wtl.algorithms {
        out.push(',');
        out.push_str(&csv_field(a));
    }
    out.push('\n');
    for (i, a) in wtl.algorithms.iter().enumerate() {
        out.push_str(&csv_field(a));
        for c in &wtl.cells[i] {
            out.push_str(&format!(",{}-{}-{}", c.wins, c.ties, c.losses));
        }
        out.push('\n');
    }
    out
}

/// Writes `results.json`, `accuracy.csv`, `complexity.csv` and `wtl.csv`
/// into `dir`, creating it if needed. Returns the written paths.
pub fn emit_report(report: &ExperimentReport, wtl: &WtlMatrix, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(&ResultsDocument { report, wtl })?;
    let files = [
        ("results.json", json + "\n"),
        ("accuracy.csv", summary_table(report, |c| c.accuracy)),
        ("complexity.csv", summary_table(report, |c| c.complexity)),
        ("wtl.csv", wtl_table(wtl)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
