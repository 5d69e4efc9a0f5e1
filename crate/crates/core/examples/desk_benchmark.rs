//! Desk-scale cross-validation: a single greedy tree against GENESIM on the
//! bundled iris and breast-cancer datasets (3 folds x 10 repeats).
//!
//! ```bash
//! cargo run --release -p genesim --example desk_benchmark [repeats]
//! ```

use std::path::Path;
use std::time::Instant;

use genesim::data::load_csv;
use genesim::eval::{build_wtl, run_experiment, AlgorithmKind, AlgorithmSpec, GenesimParams, NamedDataset};
use genesim::InduceConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let repeats: usize = std::env::args().nth(1).map_or(Ok(10), |s| s.parse())?;
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let datasets = vec![
        NamedDataset {
            name: "iris".into(),
            dataset: load_csv(data.join("iris.csv"), "species", None)?,
        },
        NamedDataset {
            name: "breast".into(),
            dataset: load_csv(data.join("breast.csv"), "class", None)?,
        },
    ];
    let algorithms = vec![
        AlgorithmSpec::new("tree", AlgorithmKind::SingleTree(InduceConfig::default())),
        AlgorithmSpec::new("genesim", AlgorithmKind::Genesim(GenesimParams::default())),
    ];
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let started = Instant::now();
    let report = run_experiment(&datasets, &algorithms, 3, repeats, 42, jobs, |cell| {
        println!(
            "{:<8} {:<8} accuracy {:.4} ± {:.4}   nodes {:.2} ± {:.2}",
            cell.dataset,
            cell.algorithm,
            cell.accuracy.mean,
            cell.accuracy.std,
            cell.complexity.mean,
            cell.complexity.std
        );
    })?;
    println!("finished in {:.1?}", started.elapsed());
    let wtl = build_wtl(&report, 0.05, 10_000)?;
    for (i, a) in wtl.algorithms.iter().enumerate() {
        for (j, b) in wtl.algorithms.iter().enumerate() {
            if i != j {
                let c = wtl.cells[i][j];
                println!("{a} vs {b}: {}-{}-{}", c.wins, c.ties, c.losses);
            }
        }
    }
    Ok(())
}
