//! Loads a CSV, shows how columns were typed, and builds stratified folds.
//!
//! ```bash
//! cargo run -p genesim --example load_dataset [path.csv label]
//! ```

use std::path::PathBuf;

use genesim::data::{load_csv, make_folds, split_half};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let (path, label) = match (args.next(), args.next()) {
        (Some(p), Some(l)) => (PathBuf::from(p), l),
        _ => (
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/breast.csv"),
            "class".to_string(),
        ),
    };
    let data = load_csv(&path, &label, None)?;
    println!("{}: {} rows, {} features", path.display(), data.n_samples(), data.n_features());
    for f in &data.features {
        let (lo, hi) = f.observed_range;
        print!("  {:<24} {:?} [{lo}, {hi}]", f.name, f.kind);
        if f.category_count() > 0 {
            print!(" {} categories", f.category_count());
        }
        println!();
    }
    for (name, count) in data.class_names.iter().zip(data.class_counts()) {
        println!("  class {name}: {count}");
    }

    let plan = make_folds(&data, 3, 2, 7)?;
    for r in 0..plan.n_repeats {
        let sizes: Vec<usize> = (0..plan.n_folds).map(|f| plan.test_indices(r, f).len()).collect();
        println!("repeat {r}: test fold sizes {sizes:?}");
    }
    println!("fold plan fingerprint {:016x}", plan.fingerprint());

    let (grow, validation) = split_half(&data, &plan.train_indices(0, 0), 1)?;
    println!("grow/validation split of fold 0 training data: {}/{}", grow.len(), validation.len());
    Ok(())
}
