//! The genetic search over decision trees.
//!
//! Fitness is validation accuracy, with node count breaking exact ties in
//! favour of the smaller tree. Parents are chosen by tournament, recombined
//! through [`crate::space`], mutated, and the population is truncated back to
//! its size after every iteration.

use std::cmp::Ordering;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{split_half, Dataset};
use crate::error::{Error, Result};
use crate::induce::{bag, build_population_pool, EnsembleConfig};
use crate::seed;
use crate::space::{merge_regions, regions_to_tree, tree_to_regions};
use crate::tree::{DecisionTree, Node};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub accuracy: f64,
    pub node_count: usize,
}

/// `Less` means `a` is fitter: higher accuracy first, then fewer nodes.
pub fn fitness_order(a: &Fitness, b: &Fitness) -> Ordering {
    b.accuracy
        .total_cmp(&a.accuracy)
        .then(a.node_count.cmp(&b.node_count))
}

#[derive(Debug, Clone)]
pub struct Individual {
    tree: DecisionTree,
    fitness: Option<Fitness>,
}

impl Individual {
    pub fn new(tree: DecisionTree) -> Self {
        Individual {
            tree,
            fitness: None,
        }
    }

    pub fn evaluated(tree: DecisionTree, dataset: &Dataset, validation: &[usize]) -> Result<Self> {
        let mut ind = Individual::new(tree);
        ind.evaluate(dataset, validation)?;
        Ok(ind)
    }

    pub fn tree(&self) -> &DecisionTree {
        &self.tree
    }

    pub fn into_tree(self) -> DecisionTree {
        self.tree
    }

    pub fn fitness(&self) -> Option<Fitness> {
        self.fitness
    }

    /// Computes and caches the fitness if it is not cached yet.
    pub fn evaluate(&mut self, dataset: &Dataset, validation: &[usize]) -> Result<Fitness> {
        if let Some(f) = self.fitness {
            return Ok(f);
        }
        let f = Fitness {
            accuracy: self.tree.accuracy(dataset, validation)?,
            node_count: self.tree.node_count(),
        };
        self.fitness = Some(f);
        Ok(f)
    }

    fn expect_fitness(&self) -> Fitness {
        self.fitness.expect("individual has not been evaluated")
    }
}

/// Ordering of two evaluated individuals; panics if either lacks fitness.
pub fn individual_order(a: &Individual, b: &Individual) -> Ordering {
    fitness_order(&a.expect_fitness(), &b.expect_fitness())
}

/// Defaults: population 32, 20 iterations, tournament of 3, 32 offspring per
/// iteration, mutation probability 0.1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub iterations: usize,
    pub tournament_size: usize,
    pub offspring_per_iteration: usize,
    pub mutation_probability: f64,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 32,
            iterations: 20,
            tournament_size: 3,
            offspring_per_iteration: 32,
            mutation_probability: 0.1,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config("population_size must be >= 2"));
        }
        if self.tournament_size < 2 {
            return Err(Error::config("tournament_size must be >= 2"));
        }
        if self.iterations < 1 {
            return Err(Error::config("iterations must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(Error::config("mutation_probability must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Evaluated individuals, kept sorted fittest first.
#[derive(Debug, Clone)]
pub struct Population {
    individuals: Vec<Individual>,
    size: usize,
}

impl Population {
    /// Sorts `individuals` and truncates to `size`. All must be evaluated.
    pub fn new(mut individuals: Vec<Individual>, size: usize) -> Result<Self> {
        if individuals.iter().any(|i| i.fitness.is_none()) {
            return Err(Error::validation("population members must be evaluated"));
        }
        individuals.sort_by(individual_order);
        individuals.truncate(size);
        Ok(Population { individuals, size })
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn best(&self) -> &Individual {
        &self.individuals[0]
    }

    pub fn mean_accuracy(&self) -> f64 {
        self.individuals
            .iter()
            .map(|i| i.expect_fitness().accuracy)
            .sum::<f64>()
            / self.len() as f64
    }
}

/// Draws `tournament_size` members uniformly with replacement and returns
/// the fittest. Among equally fit draws the earliest one wins.
pub fn tournament_select<'p, R: Rng>(
    pop: &'p Population,
    tournament_size: usize,
    rng: &mut R,
) -> &'p Individual {
    let n = pop.len();
    let mut best = &pop.individuals[rng.gen_range(0..n)];
    for _ in 1..tournament_size {
        let challenger = &pop.individuals[rng.gen_range(0..n)];
        if individual_order(challenger, best) == Ordering::Less {
            best = challenger;
        }
    }
    best
}

/// Merges the decision spaces of both parents and rebuilds a tree from the
/// intersection. The child is evaluated on `validation`.
pub fn recombine<R: Rng>(
    p1: &Individual,
    p2: &Individual,
    dataset: &Dataset,
    validation: &[usize],
    rng: &mut R,
) -> Result<Individual> {
    let k = dataset.n_features();
    let a = tree_to_regions(&p1.tree, k)?;
    let b = tree_to_regions(&p2.tree, k)?;
    let merged = merge_regions(&a, &b)?;
    let tree = regions_to_tree(&merged, rng)?;
    Individual::evaluated(tree, dataset, validation)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    Threshold,
    SwapSubtrees,
}

/// Preorder sizes of every subtree.
fn subtree_sizes(node: &Node, out: &mut Vec<usize>) -> usize {
    let at = out.len();
    out.push(0);
    let size = match node {
        Node::Leaf { .. } => 1,
        Node::Split { left, right, .. } => 1 + subtree_sizes(left, out) + subtree_sizes(right, out),
    };
    out[at] = size;
    size
}

/// Non-nested `(i, j)` preorder pairs, `i < j`.
fn swappable_pairs(tree: &DecisionTree) -> Vec<(usize, usize)> {
    let mut sizes = Vec::with_capacity(tree.node_count());
    subtree_sizes(tree.root(), &mut sizes);
    let mut pairs = Vec::new();
    for i in 1..sizes.len() {
        // everything after i's subtree is disjoint from it
        for j in i + sizes[i]..sizes.len() {
            pairs.push((i, j));
        }
    }
    pairs
}

fn mutate_threshold<R: Rng>(tree: &DecisionTree, dataset: &Dataset, rng: &mut R) -> Option<DecisionTree> {
    let internal = tree.list_internal_nodes();
    if internal.is_empty() {
        return None;
    }
    let handle = internal[rng.gen_range(0..internal.len())];
    let feature = match tree.subtree_at(handle).ok()? {
        Node::Split { feature, .. } => *feature,
        Node::Leaf { .. } => return None,
    };
    let (lo, hi) = dataset.features.get(feature)?.observed_range;
    let value = if lo < hi { rng.gen_range(lo..=hi) } else { lo };
    tree.with_threshold(handle, value).ok()
}

fn mutate_swap<R: Rng>(tree: &DecisionTree, rng: &mut R) -> Option<DecisionTree> {
    let pairs = swappable_pairs(tree);
    if pairs.is_empty() {
        return None;
    }
    let (i, j) = pairs[rng.gen_range(0..pairs.len())];
    let root = tree.root();
    let first = root.at(i)?.clone();
    let second = root.at(j)?.clone();
    // j sits after i's subtree, so its position shifts by the size change
    let shifted = j + second.node_count() - first.node_count();
    let swapped = tree.replaced_at(i, second);
    Some(swapped.replaced_at(shifted, first))
}

/// Applies one mutation with probability `p` and returns which one, if any.
/// A swap on a tree without two disjoint subtrees falls back to a threshold
/// change; a threshold change on a bare leaf does nothing.
pub fn mutate_with<R: Rng>(
    ind: Individual,
    dataset: &Dataset,
    validation: &[usize],
    rng: &mut R,
    p: f64,
) -> Result<(Individual, Option<Mutation>)> {
    if !(rng.gen::<f64>() < p) {
        return Ok((ind, None));
    }
    let outcome = if rng.gen_bool(0.5) {
        mutate_swap(&ind.tree, rng)
            .map(|t| (t, Mutation::SwapSubtrees))
            .or_else(|| mutate_threshold(&ind.tree, dataset, rng).map(|t| (t, Mutation::Threshold)))
    } else {
        mutate_threshold(&ind.tree, dataset, rng).map(|t| (t, Mutation::Threshold))
    };
    match outcome {
        Some((tree, kind)) => Ok((Individual::evaluated(tree, dataset, validation)?, Some(kind))),
        None => Ok((ind, None)),
    }
}

pub fn mutate<R: Rng>(
    ind: Individual,
    dataset: &Dataset,
    validation: &[usize],
    rng: &mut R,
    p: f64,
) -> Result<Individual> {
    mutate_with(ind, dataset, validation, rng, p).map(|(i, _)| i)
}

/// Truncation replacement: parents and offspring sorted together, the
/// fittest `population_size` kept. Parents precede offspring on full ties.
pub fn replace(pop: Population, offspring: Vec<Individual>) -> Result<Population> {
    let size = pop.size;
    let mut all = pop.individuals;
    all.extend(offspring);
    Population::new(all, size)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub best_accuracy: f64,
    pub best_node_count: usize,
    pub mean_accuracy: f64,
}

impl TraceRow {
    fn of(iteration: usize, pop: &Population) -> Self {
        let best = pop.best().expect_fitness();
        TraceRow {
            iteration,
            best_accuracy: best.accuracy,
            best_node_count: best.node_count,
            mean_accuracy: pop.mean_accuracy(),
        }
    }

    pub fn fitness(&self) -> Fitness {
        Fitness {
            accuracy: self.best_accuracy,
            node_count: self.best_node_count,
        }
    }
}

pub fn write_trace_csv<W: Write>(trace: &[TraceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "iteration,best_accuracy,best_node_count,mean_accuracy")?;
    for row in trace {
        writeln!(
            out,
            "{},{},{},{}",
            row.iteration, row.best_accuracy, row.best_node_count, row.mean_accuracy
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct GenesimRun {
    pub tree: DecisionTree,
    pub fitness: Fitness,
    /// Row 0 is the initial population, then one row per iteration.
    pub trace: Vec<TraceRow>,
    pub grow: Vec<usize>,
    pub validation: Vec<usize>,
}

/// Sizes the evaluated pool to exactly `size`: the fittest are kept, and a
/// short pool is topped up with extra bagged trees.
fn fill_pool(
    mut pool: Vec<Individual>,
    size: usize,
    dataset: &Dataset,
    grow: &[usize],
    validation: &[usize],
    ensemble: &EnsembleConfig,
) -> Result<Vec<Individual>> {
    let mut round = 0u64;
    while pool.len() < size {
        let base = &ensemble.base_configs[round as usize % ensemble.base_configs.len()];
        let missing = size - pool.len();
        let extra = bag(
            dataset,
            grow,
            base,
            missing,
            seed::derive(ensemble.seed, &[u64::MAX, round]),
        )?;
        for tree in extra {
            pool.push(Individual::evaluated(tree, dataset, validation)?);
        }
        round += 1;
    }
    Ok(pool)
}

/// Runs the whole search on `train_indices`, half of which are held out for
/// fitness.
pub fn run_genesim(
    dataset: &Dataset,
    train_indices: &[usize],
    config: &GaConfig,
    ensemble: &EnsembleConfig,
) -> Result<GenesimRun> {
    config.validate()?;
    ensemble.validate()?;
    let (grow, validation) = split_half(dataset, train_indices, seed::derive(config.seed, &[0]))?;
    let ensemble = EnsembleConfig {
        seed: seed::derive(config.seed, &[1, ensemble.seed]),
        ..ensemble.clone()
    };
    let pool = build_population_pool(dataset, &grow, &ensemble)?
        .into_iter()
        .map(|t| Individual::evaluated(t, dataset, &validation))
        .collect::<Result<Vec<_>>>()?;
    let pool = fill_pool(pool, config.population_size, dataset, &grow, &validation, &ensemble)?;
    let mut pop = Population::new(pool, config.population_size)?;
    let mut trace = vec![TraceRow::of(0, &pop)];

    for iteration in 1..=config.iterations {
        let offspring = (0..config.offspring_per_iteration)
            .into_par_iter()
            .map(|o| {
                let mut rng = seed::derived_rng(config.seed, &[2, iteration as u64, o as u64]);
                let p1 = tournament_select(&pop, config.tournament_size, &mut rng);
                let p2 = tournament_select(&pop, config.tournament_size, &mut rng);
                let child = recombine(p1, p2, dataset, &validation, &mut rng)?;
                mutate(child, dataset, &validation, &mut rng, config.mutation_probability)
            })
            .collect::<Result<Vec<_>>>()?;
        pop = replace(pop, offspring)?;
        trace.push(TraceRow::of(iteration, &pop));
    }

    let best = pop.best().clone();
    let fitness = best.expect_fitness();
    Ok(GenesimRun {
        tree: best.into_tree(),
        fitness,
        trace,
        grow,
        validation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit(accuracy: f64, node_count: usize) -> Fitness {
        Fitness {
            accuracy,
            node_count,
        }
    }

    #[test]
    fn accuracy_dominates() {
        assert_eq!(fitness_order(&fit(0.90, 15), &fit(0.85, 3)), Ordering::Less);
    }

    #[test]
    fn smaller_tree_breaks_ties() {
        assert_eq!(fitness_order(&fit(0.90, 15), &fit(0.90, 7)), Ordering::Greater);
        assert_eq!(fitness_order(&fit(0.90, 7), &fit(0.90, 7)), Ordering::Equal);
    }

    #[test]
    fn config_validation() {
        assert!(GaConfig::default().validate().is_ok());
        for bad in [
            GaConfig {
                iterations: 0,
                ..Default::default()
            },
            GaConfig {
                population_size: 1,
                ..Default::default()
            },
            GaConfig {
                tournament_size: 1,
                ..Default::default()
            },
            GaConfig {
                mutation_probability: 1.5,
                ..Default::default()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn swap_pairs_exclude_nesting() {
        let leaf = || Node::leaf(vec![1.0, 0.0]);
        let t = DecisionTree::new(
            Node::split(0, 1.0, Node::split(0, 0.0, leaf(), leaf()), leaf()),
            2,
        )
        .unwrap();
        // preorder: 0 root, 1 inner, 2 leaf, 3 leaf, 4 leaf
        assert_eq!(swappable_pairs(&t), vec![(1, 4), (2, 3), (2, 4), (3, 4)]);
        let bare = DecisionTree::leaf(vec![1.0, 0.0]).unwrap();
        assert!(swappable_pairs(&bare).is_empty());
    }
}
