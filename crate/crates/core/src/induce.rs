//! Greedy top-down tree induction and the bagging/boosting factories that
//! fill the initial population.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::seed;
use crate::tree::{DecisionTree, Node};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Gini,
    Entropy,
}

impl Criterion {
    pub const ALL: [Criterion; 2] = [Criterion::Gini, Criterion::Entropy];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Gini => "gini",
            Criterion::Entropy => "entropy",
        }
    }

    /// Impurity of a vector of class counts (or weights) summing to `total`.
    pub fn impurity(self, counts: &[f64], total: f64) -> f64 {
        if total <= 0.0 {
            return 0.0;
        }
        match self {
            Criterion::Gini => 1.0 - counts.iter().map(|c| (c / total).powi(2)).sum::<f64>(),
            Criterion::Entropy => -counts
                .iter()
                .filter(|&&c| c > 0.0)
                .map(|c| {
                    let p = c / total;
                    p * p.log2()
                })
                .sum::<f64>(),
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gini" => Ok(Criterion::Gini),
            "entropy" => Ok(Criterion::Entropy),
            other => Err(Error::config(format!(
                "unknown criterion '{other}' (valid: gini, entropy)"
            ))),
        }
    }
}

/// `1 - sum(p^2)`
pub fn gini(distribution: &[f64]) -> f64 {
    Criterion::Gini.impurity(distribution, distribution.iter().sum())
}

/// `-sum(p log2 p)` with `0 log 0 = 0`
pub fn entropy(distribution: &[f64]) -> f64 {
    Criterion::Entropy.impurity(distribution, distribution.iter().sum())
}

/// Defaults: gini, no depth cap, `min_samples_leaf = 2`, `min_samples_split = 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InduceConfig {
    pub criterion: Criterion,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    pub min_samples_split: usize,
    /// Breaks exact ties between equally good splits.
    pub seed: u64,
}

impl Default for InduceConfig {
    fn default() -> Self {
        InduceConfig {
            criterion: Criterion::Gini,
            max_depth: None,
            min_samples_leaf: 2,
            min_samples_split: 4,
            seed: 0,
        }
    }
}

impl InduceConfig {
    pub fn with_criterion(criterion: Criterion) -> Self {
        InduceConfig {
            criterion,
            ..Default::default()
        }
    }

    /// Coarser caps used for ensemble pool members. Pool trees are grown on
    /// half the training data and later merged, so unpruned members bloat the
    /// merged trees.
    pub fn pool_member(criterion: Criterion) -> Self {
        InduceConfig {
            criterion,
            min_samples_leaf: 10,
            min_samples_split: 20,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_samples_leaf < 1 {
            return Err(Error::config("min_samples_leaf must be >= 1"));
        }
        if self.min_samples_split < 2 {
            return Err(Error::config("min_samples_split must be >= 2"));
        }
        if self.max_depth == Some(0) {
            return Err(Error::config("max_depth must be >= 1 when set"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    pub bagging_rounds: usize,
    /// Boosting rounds run once per base config.
    pub boosting_rounds: usize,
    pub boost_max_depth: usize,
    pub base_configs: Vec<InduceConfig>,
    pub seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            bagging_rounds: 10,
            boosting_rounds: 5,
            boost_max_depth: 3,
            base_configs: Criterion::ALL
                .iter()
                .map(|&c| InduceConfig::pool_member(c))
                .collect(),
            seed: 0,
        }
    }
}

impl EnsembleConfig {
    /// Upper bound on the pool size (boosting may stop early).
    pub fn max_pool_size(&self) -> usize {
        self.base_configs.len() * (1 + self.bagging_rounds + self.boosting_rounds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_configs.is_empty() {
            return Err(Error::config("ensemble needs at least one base config"));
        }
        if self.boosting_rounds > 0 && self.boost_max_depth == 0 {
            return Err(Error::config("boost_max_depth must be >= 1"));
        }
        self.base_configs.iter().try_for_each(InduceConfig::validate)
    }
}

fn laplace_leaf(counts: &[f64]) -> Node {
    let total: f64 = counts.iter().sum::<f64>() + counts.len() as f64;
    Node::leaf(counts.iter().map(|c| (c + 1.0) / total).collect())
}

struct Grower<'a, R> {
    dataset: &'a Dataset,
    config: &'a InduceConfig,
    rng: R,
}

struct Candidate {
    feature: usize,
    threshold: f64,
}

const GAIN_EPS: f64 = 1e-12;

impl<R: Rng> Grower<'_, R> {
    fn counts(&self, idx: &[usize]) -> Vec<f64> {
        let mut counts = vec![0.0; self.dataset.n_classes()];
        for &i in idx {
            counts[self.dataset.labels[i]] += 1.0;
        }
        counts
    }

    fn grow(&mut self, idx: &mut [usize], depth: usize) -> Node {
        let counts = self.counts(idx);
        let n = idx.len();
        let pure = counts.iter().filter(|&&c| c > 0.0).count() <= 1;
        let depth_capped = self.config.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_capped || n < self.config.min_samples_split {
            return laplace_leaf(&counts);
        }
        let Some(best) = self.best_split(idx, &counts) else {
            return laplace_leaf(&counts);
        };
        let rows = &self.dataset.rows;
        let mut split = 0;
        for j in 0..n {
            if rows[idx[j]][best.feature] <= best.threshold {
                idx.swap(split, j);
                split += 1;
            }
        }
        let (left, right) = idx.split_at_mut(split);
        let left = self.grow(left, depth + 1);
        let right = self.grow(right, depth + 1);
        Node::split(best.feature, best.threshold, left, right)
    }

    fn best_split(&mut self, idx: &[usize], counts: &[f64]) -> Option<Candidate> {
        let n = idx.len();
        let total = n as f64;
        let min_leaf = self.config.min_samples_leaf.max(1);
        if n < 2 * min_leaf {
            return None;
        }
        let parent = self.config.criterion.impurity(counts, total);
        let rows = &self.dataset.rows;
        let labels = &self.dataset.labels;
        let mut ties: Vec<Candidate> = Vec::new();
        let mut best_gain = GAIN_EPS;
        let mut sorted = idx.to_vec();
        let mut left = vec![0.0; counts.len()];
        let mut right = vec![0.0; counts.len()];
        for feature in 0..self.dataset.n_features() {
            sorted.sort_by(|&a, &b| rows[a][feature].total_cmp(&rows[b][feature]));
            left.iter_mut().for_each(|c| *c = 0.0);
            right.copy_from_slice(counts);
            for pos in 1..n {
                let moved = labels[sorted[pos - 1]];
                left[moved] += 1.0;
                right[moved] -= 1.0;
                if pos < min_leaf || n - pos < min_leaf {
                    continue;
                }
                let lo = rows[sorted[pos - 1]][feature];
                let hi = rows[sorted[pos]][feature];
                if lo >= hi {
                    continue;
                }
                let nl = pos as f64;
                let nr = total - nl;
                let child = (nl / total) * self.config.criterion.impurity(&left, nl)
                    + (nr / total) * self.config.criterion.impurity(&right, nr);
                let gain = parent - child;
                if gain > best_gain + GAIN_EPS {
                    best_gain = gain;
                    ties.clear();
                }
                if gain >= best_gain - GAIN_EPS && gain > GAIN_EPS {
                    let mid = lo + (hi - lo) / 2.0;
                    let threshold = if mid < hi { mid } else { lo };
                    ties.push(Candidate { feature, threshold });
                }
            }
        }
        match ties.len() {
            0 => None,
            1 => ties.pop(),
            len => Some(ties.swap_remove(self.rng.gen_range(0..len))),
        }
    }
}

/// Greedy induction on the rows at `indices` (duplicates allowed).
pub fn induce_tree(dataset: &Dataset, indices: &[usize], config: &InduceConfig) -> Result<DecisionTree> {
    if indices.is_empty() {
        return Err(Error::validation("cannot induce a tree from zero samples"));
    }
    config.validate()?;
    let mut grower = Grower {
        dataset,
        config,
        rng: seed::rng(config.seed),
    };
    let mut idx = indices.to_vec();
    let root = grower.grow(&mut idx, 0);
    DecisionTree::new(root, dataset.n_classes())
}

fn bootstrap_sample(indices: &[usize], rng: &mut impl Rng) -> Vec<usize> {
    (0..indices.len())
        .map(|_| indices[rng.gen_range(0..indices.len())])
        .collect()
}

/// One tree per round, each grown on a bootstrap resample of `indices`.
pub fn bag(
    dataset: &Dataset,
    indices: &[usize],
    config: &InduceConfig,
    rounds: usize,
    seed: u64,
) -> Result<Vec<DecisionTree>> {
    if rounds < 1 {
        return Err(Error::config("bagging needs at least one round"));
    }
    if indices.is_empty() {
        return Err(Error::validation("cannot bag zero samples"));
    }
    (0..rounds)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed::derived_rng(seed, &[r as u64]);
            let sample = bootstrap_sample(indices, &mut rng);
            let cfg = InduceConfig {
                seed: seed::derive(seed, &[r as u64, 1]),
                ..*config
            };
            induce_tree(dataset, &sample, &cfg)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BoostMember {
    pub tree: DecisionTree,
    /// Weighted training error on the round's weights.
    pub error: f64,
    /// Committee vote, `ln((1 - error)(C - 1) / error)`.
    pub vote: f64,
}

#[derive(Debug, Clone)]
pub struct BoostRun {
    pub members: Vec<BoostMember>,
    /// Sample weights at the start of every round that was run.
    pub weights: Vec<Vec<f64>>,
}

/// Vote given to a round with zero training error.
const PERFECT_VOTE: f64 = 23.0;

/// AdaBoost.M1 with weight-proportional resampling and depth-capped trees.
pub fn boost_run(
    dataset: &Dataset,
    indices: &[usize],
    config: &InduceConfig,
    rounds: usize,
    max_depth: usize,
    seed: u64,
) -> Result<BoostRun> {
    if rounds < 1 {
        return Err(Error::config("boosting needs at least one round"));
    }
    if indices.is_empty() {
        return Err(Error::validation("cannot boost zero samples"));
    }
    let n = indices.len();
    let n_classes = dataset.n_classes() as f64;
    let give_up = 1.0 - 1.0 / n_classes;
    let mut weights = vec![1.0 / n as f64; n];
    let mut run = BoostRun {
        members: Vec::new(),
        weights: Vec::new(),
    };
    let cfg_depth = InduceConfig {
        max_depth: Some(max_depth.max(1)),
        ..*config
    };
    for r in 0..rounds {
        run.weights.push(weights.clone());
        let mut rng = seed::derived_rng(seed, &[r as u64]);
        let sampler = WeightedIndex::new(&weights).map_err(|e| Error::validation(e.to_string()))?;
        let sample: Vec<usize> = (0..n).map(|_| indices[sampler.sample(&mut rng)]).collect();
        let cfg = InduceConfig {
            seed: seed::derive(seed, &[r as u64, 1]),
            ..cfg_depth
        };
        let tree = induce_tree(dataset, &sample, &cfg)?;
        let wrong: Vec<bool> = indices
            .iter()
            .map(|&i| tree.predict_unchecked(&dataset.rows[i]) != dataset.labels[i])
            .collect();
        let error: f64 = weights
            .iter()
            .zip(&wrong)
            .filter(|(_, &w)| w)
            .map(|(p, _)| p)
            .sum();
        if error >= give_up {
            break;
        }
        if error <= 0.0 {
            run.members.push(BoostMember {
                tree,
                error: 0.0,
                vote: PERFECT_VOTE,
            });
            break;
        }
        let factor = (1.0 - error) * (n_classes - 1.0) / error;
        run.members.push(BoostMember {
            tree,
            error,
            vote: factor.ln(),
        });
        for (w, &bad) in weights.iter_mut().zip(&wrong) {
            if bad {
                *w *= factor;
            }
        }
        let sum: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= sum);
    }
    Ok(run)
}

/// The individual round trees of [`boost_run`].
pub fn boost(
    dataset: &Dataset,
    indices: &[usize],
    config: &InduceConfig,
    rounds: usize,
    max_depth: usize,
    seed: u64,
) -> Result<Vec<DecisionTree>> {
    Ok(boost_run(dataset, indices, config, rounds, max_depth, seed)?
        .members
        .into_iter()
        .map(|m| m.tree)
        .collect())
}

/// Per base config: one plain tree, then the bagged trees, then the boosted
/// trees.
pub fn build_population_pool(
    dataset: &Dataset,
    indices: &[usize],
    config: &EnsembleConfig,
) -> Result<Vec<DecisionTree>> {
    config.validate()?;
    let mut pool = Vec::with_capacity(config.max_pool_size());
    for (b, base) in config.base_configs.iter().enumerate() {
        let b = b as u64;
        let plain = InduceConfig {
            seed: seed::derive(config.seed, &[b, 0]),
            ..*base
        };
        pool.push(induce_tree(dataset, indices, &plain)?);
        if config.bagging_rounds > 0 {
            pool.extend(bag(
                dataset,
                indices,
                base,
                config.bagging_rounds,
                seed::derive(config.seed, &[b, 1]),
            )?);
        }
        if config.boosting_rounds > 0 {
            pool.extend(boost(
                dataset,
                indices,
                base,
                config.boosting_rounds,
                config.boost_max_depth,
                seed::derive(config.seed, &[b, 2]),
            )?);
        }
    }
    if pool.is_empty() {
        return Err(Error::config("ensemble configuration produced no trees"));
    }
    Ok(pool)
}
