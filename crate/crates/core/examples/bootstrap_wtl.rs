//! Paired bootstrap p-values and a Win-Tie-Loss matrix over a cross-validated
//! comparison, written out as report files.
//!
//! ```bash
//! cargo run --release -p genesim --example bootstrap_wtl [output-dir]
//! ```

use std::path::Path;

use genesim::data::load_csv;
use genesim::eval::{
    bootstrap_p, build_wtl, emit_report, run_experiment, AlgorithmKind, AlgorithmSpec, BaggingParams, NamedDataset,
};
use genesim::InduceConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "wtl-report".into());
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let datasets = vec![
        NamedDataset { name: "iris".into(), dataset: load_csv(dir.join("iris.csv"), "species", None)? },
        NamedDataset { name: "breast".into(), dataset: load_csv(dir.join("breast.csv"), "class", None)? },
        NamedDataset { name: "pima".into(), dataset: load_csv(dir.join("pima.csv"), "type", None)? },
    ];
    let algorithms = vec![
        AlgorithmSpec::new("tree", AlgorithmKind::SingleTree(InduceConfig::default())),
        AlgorithmSpec::new("bagging", AlgorithmKind::BaggedCommittee(BaggingParams::default())),
        AlgorithmSpec::new("majority", AlgorithmKind::Majority),
    ];
    let report = run_experiment(&datasets, &algorithms, 3, 10, 1, 1, |_| {})?;

    for ds in &report.datasets {
        let tree = report.cell(ds, "tree").unwrap();
        let bagging = report.cell(ds, "bagging").unwrap();
        let p = bootstrap_p(&bagging.accuracies, &tree.accuracies, 10_000, 0)?;
        println!(
            "{ds:<7} bagging {:.4} vs tree {:.4}: p = {p:.4}",
            bagging.accuracy.mean, tree.accuracy.mean
        );
    }

    let wtl = build_wtl(&report, 0.05, 10_000)?;
    println!("\nwins-ties-losses (row against column)");
    for (i, a) in wtl.algorithms.iter().enumerate() {
        let row: Vec<String> = wtl.cells[i].iter().map(|c| format!("{}-{}-{}", c.wins, c.ties, c.losses)).collect();
        println!("{a:<9} {}", row.join("  "));
    }
    for path in emit_report(&report, &wtl, &out)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
