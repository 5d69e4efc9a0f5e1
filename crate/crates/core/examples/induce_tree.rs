//! Greedy trees with both impurity criteria, plus the bagged and boosted
//! trees that seed GENESIM's population.
//!
//! ```bash
//! cargo run -p genesim --example induce_tree
//! ```

use std::path::Path;

use genesim::data::{load_csv, make_folds};
use genesim::induce::{bag, boost_run, build_population_pool, induce_tree};
use genesim::{Criterion, EnsembleConfig, InduceConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = load_csv(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv"), "species", None)?;
    let plan = make_folds(&data, 3, 1, 0)?;
    let (train, test) = (plan.train_indices(0, 0), plan.test_indices(0, 0));

    for criterion in Criterion::ALL {
        let tree = induce_tree(&data, &train, &InduceConfig::with_criterion(criterion))?;
        println!(
            "{:<8} nodes {:>2}  depth {}  test accuracy {:.3}",
            criterion.name(),
            tree.node_count(),
            tree.depth(),
            tree.accuracy(&data, &test)?
        );
    }

    let stump = InduceConfig { max_depth: Some(2), ..Default::default() };
    println!("\ndepth-2 tree:\n{}", induce_tree(&data, &train, &stump)?.serialize());

    let bagged = bag(&data, &train, &InduceConfig::default(), 5, 3)?;
    let sizes: Vec<usize> = bagged.iter().map(|t| t.node_count()).collect();
    println!("\nbagged tree sizes {sizes:?}");

    let boosted = boost_run(&data, &train, &InduceConfig::default(), 5, 2, 3)?;
    for (i, m) in boosted.members.iter().enumerate() {
        println!("boost round {i}: weighted error {:.3}, vote {:.2}", m.error, m.vote);
    }

    let pool = build_population_pool(&data, &train, &EnsembleConfig::default())?;
    println!("\ndefault pool: {} trees", pool.len());
    Ok(())
}
