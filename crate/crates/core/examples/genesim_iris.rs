//! One full GENESIM run on a stratified iris holdout, printing the
//! per-iteration trace and the final tree.
//!
//! ```bash
//! cargo run --release -p genesim --example genesim_iris [seed]
//! ```

use std::path::Path;

use genesim::data::{load_csv, make_folds};
use genesim::genetic::{run_genesim, write_trace_csv};
use genesim::induce::induce_tree;
use genesim::{EnsembleConfig, GaConfig, InduceConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map_or(Ok(0), |s| s.parse())?;
    let data = load_csv(Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv"), "species", None)?;
    let plan = make_folds(&data, 3, 1, seed)?;
    let (train, test) = (plan.train_indices(0, 0), plan.test_indices(0, 0));

    let ga = GaConfig { seed, ..Default::default() };
    let run = run_genesim(&data, &train, &ga, &EnsembleConfig::default())?;
    write_trace_csv(&run.trace, std::io::stdout().lock())?;

    let single = induce_tree(&data, &train, &InduceConfig::default())?;
    println!(
        "\ngenesim: {} nodes, test accuracy {:.3}",
        run.tree.node_count(),
        run.tree.accuracy(&data, &test)?
    );
    println!(
        "single tree: {} nodes, test accuracy {:.3}",
        single.node_count(),
        single.accuracy(&data, &test)?
    );
    println!("\n{}", run.tree.serialize());
    Ok(())
}
