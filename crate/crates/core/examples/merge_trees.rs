//! The recombination operator on its own: two trees become decision spaces,
//! the spaces are intersected, and a single tree is rebuilt from the result.
//!
//! ```bash
//! cargo run -p genesim --example merge_trees
//! ```

use genesim::seed;
use genesim::space::{find_candidate_splits, merge_regions, naive_merge, rebuild_tree, tree_to_regions};
use genesim::{DecisionTree, Node};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // x0 <= 2 splits the plane vertically, x1 <= 1 horizontally
    let a = DecisionTree::new(
        Node::split(0, 2.0, Node::leaf(vec![0.9, 0.1]), Node::leaf(vec![0.2, 0.8])),
        2,
    )?;
    let b = DecisionTree::new(
        Node::split(
            1,
            1.0,
            Node::leaf(vec![0.7, 0.3]),
            Node::split(0, 4.0, Node::leaf(vec![0.4, 0.6]), Node::leaf(vec![0.1, 0.9])),
        ),
        2,
    )?;

    let ra = tree_to_regions(&a, 2)?;
    let rb = tree_to_regions(&b, 2)?;
    let merged = merge_regions(&ra, &rb)?;
    assert_eq!(merged.clone().canonical(), naive_merge(&ra, &rb)?.canonical());
    println!("{} x {} regions -> {} regions", ra.len(), rb.len(), merged.len());
    println!("{}", merged.to_json());

    println!("clean splits of the whole space: {:?}", find_candidate_splits(&merged, &merged.domain));

    let rebuilt = rebuild_tree(&merged, &mut seed::rng(1))?;
    println!(
        "rebuilt tree: {} nodes, {} fallback splits",
        rebuilt.tree.node_count(),
        rebuilt.fallback_splits
    );
    println!("{}", rebuilt.tree.serialize());

    for p in [[1.0, 0.0], [1.0, 3.0], [3.0, 3.0], [5.0, 3.0]] {
        println!(
            "{p:?}: a -> {}, b -> {}, merged -> {}",
            a.predict(&p)?,
            b.predict(&p)?,
            rebuilt.tree.predict(&p)?
        );
    }
    Ok(())
}
