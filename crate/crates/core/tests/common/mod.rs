#![allow(dead_code)]

use std::path::PathBuf;

use genesim::data::load_csv;
use genesim::space::{Interval, Region, RegionSet};
use genesim::{Dataset, DecisionTree, FeatureKind, FeatureSpec, Node};
use rand::Rng;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn iris() -> Dataset {
    load_csv(data_dir().join("iris.csv"), "species", None).unwrap()
}

pub fn breast() -> Dataset {
    load_csv(data_dir().join("breast.csv"), "class", None).unwrap()
}

pub fn pima() -> Dataset {
    load_csv(data_dir().join("pima.csv"), "type", None).unwrap()
}

/// Thresholds come from a coarse grid so sibling trees share facets.
pub fn grid_value<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(0..=20) as f64 * 0.5
}

pub fn random_distribution<R: Rng>(rng: &mut R, n_classes: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n_classes).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

fn random_node<R: Rng>(rng: &mut R, k: usize, depth: usize, n_classes: usize) -> Node {
    if depth == 0 || rng.gen_bool(0.25) {
        return Node::leaf(random_distribution(rng, n_classes));
    }
    Node::split(
        rng.gen_range(0..k),
        grid_value(rng),
        random_node(rng, k, depth - 1, n_classes),
        random_node(rng, k, depth - 1, n_classes),
    )
}

pub fn random_tree<R: Rng>(rng: &mut R, k: usize, max_depth: usize, n_classes: usize) -> DecisionTree {
    DecisionTree::new(random_node(rng, k, max_depth, n_classes), n_classes).unwrap()
}

/// Mostly off-grid points, with a share landing exactly on grid thresholds.
pub fn random_point<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    (0..k)
        .map(|_| {
            if rng.gen_bool(0.2) {
                grid_value(rng)
            } else {
                rng.gen_range(-1.0..11.0)
            }
        })
        .collect()
}

/// Arbitrary (possibly overlapping) boxes; some sides are unbounded.
pub fn random_region_set<R: Rng>(rng: &mut R, k: usize, n: usize, n_classes: usize) -> RegionSet {
    let regions = (0..n)
        .map(|_| {
            let bounds = (0..k)
                .map(|_| {
                    let a = grid_value(rng);
                    let b = grid_value(rng);
                    let (lo, hi) = if a < b { (a, b) } else { (b, a + 0.5) };
                    let lo = if rng.gen_bool(0.1) { f64::NEG_INFINITY } else { lo };
                    let hi = if rng.gen_bool(0.1) { f64::INFINITY } else { hi };
                    Interval::new(lo, hi)
                })
                .collect();
            Region {
                bounds,
                distribution: random_distribution(rng, n_classes),
            }
        })
        .collect();
    RegionSet::new(k, vec![Interval::UNBOUNDED; k], regions).unwrap()
}

/// Continuous dataset over the given points, labelled by `tree`.
pub fn labelled_by(tree: &DecisionTree, points: Vec<Vec<f64>>) -> Dataset {
    let k = points[0].len();
    let n_classes = tree.n_classes();
    let mut labels: Vec<usize> = points.iter().map(|p| tree.predict(p).unwrap()).collect();
    // every class must be present
    for c in 0..n_classes {
        labels[c] = c;
    }
    let features = (0..k)
        .map(|j| FeatureSpec {
            name: format!("x{j}"),
            kind: FeatureKind::Continuous,
            observed_range: (0.0, 0.0),
            categories: Vec::new(),
        })
        .collect();
    let names = (0..n_classes).map(|c| format!("c{c}")).collect();
    Dataset::new(features, points, labels, names).unwrap()
}
