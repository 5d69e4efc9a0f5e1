//! Genetic extraction of a single interpretable decision tree from an
//! ensemble.
//!
//! The pipeline is:
//!
//! 1. [`data`] loads a CSV file into a typed [`Dataset`] and produces
//!    stratified cross-validation folds.
//! 2. [`induce`] grows a diverse pool of axis-parallel trees (plain, bagged
//!    and boosted).
//! 3. [`genetic`] evolves that pool. Two parents are recombined by turning
//!    both into decision spaces, intersecting them, and rebuilding a tree
//!    from the merged space ([`space`]).
//! 4. [`eval`] runs the repeated cross-validation protocol, the paired
//!    bootstrap test and the Win-Tie-Loss matrix.
//!
//! The `genesim` binary wraps these behind the `induce`, `genesim`,
//! `benchmark` and `merge` subcommands ([`cli`]).

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod genetic;
pub mod induce;
pub mod seed;
pub mod space;
pub mod tree;

pub use data::{Dataset, FeatureKind, FeatureSpec, FoldPlan};
pub use error::{Error, Result};
pub use genetic::{GaConfig, Individual, Population};
pub use induce::{Criterion, EnsembleConfig, InduceConfig};
pub use space::{Interval, Region, RegionSet};
pub use tree::{DecisionTree, Node, NodeHandle};
