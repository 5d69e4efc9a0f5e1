mod common;

use std::time::{Duration, Instant};

use genesim::seed;
use genesim::space::{
    find_candidate_splits, merge_regions, naive_merge, rebuild_tree, regions_to_tree, tree_to_regions,
};
use genesim::tree::argmax;
use genesim::{DecisionTree, Interval, Node, Region, RegionSet};
use proptest::prelude::*;
use rand::Rng;

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi)
}

fn one_split(feature: usize, threshold: f64) -> DecisionTree {
    DecisionTree::new(
        Node::split(feature, threshold, Node::leaf(vec![0.8, 0.2]), Node::leaf(vec![0.3, 0.7])),
        2,
    )
    .unwrap()
}

#[test]
fn overlay_of_two_orthogonal_splits() {
    let a = tree_to_regions(&one_split(0, 1.0), 2).unwrap();
    let b = tree_to_regions(&one_split(1, 2.0), 2).unwrap();
    let m = merge_regions(&a, &b).unwrap();
    assert_eq!(m.len(), 4);
    let q = [0.0, 0.0];
    let owner: Vec<&Region> = m.containing(&q).collect();
    assert_eq!(owner.len(), 1);
    assert_eq!(owner[0].distribution, vec![0.8, 0.2]);
    let q = [0.0, 5.0];
    let owner: Vec<&Region> = m.containing(&q).collect();
    assert!((owner[0].distribution[0] - 0.55).abs() < 1e-12);
}

#[test]
fn disjoint_sets_merge_to_nothing() {
    let r = |lo, hi| Region { bounds: vec![iv(lo, hi)], distribution: vec![1.0, 0.0] };
    let a = RegionSet::new(1, vec![Interval::UNBOUNDED], vec![r(0.0, 1.0)]).unwrap();
    let b = RegionSet::new(1, vec![Interval::UNBOUNDED], vec![r(1.0, 2.0)]).unwrap();
    // (0,1] and (1,2] only touch
    assert!(merge_regions(&a, &b).unwrap().is_empty());
    assert!(naive_merge(&a, &b).unwrap().is_empty());
}

#[test]
fn dimension_mismatch_is_an_error() {
    let a = tree_to_regions(&one_split(0, 1.0), 1).unwrap();
    let b = tree_to_regions(&one_split(1, 1.0), 2).unwrap();
    assert!(merge_regions(&a, &b).is_err());
    assert!(naive_merge(&a, &b).is_err());
    assert!(tree_to_regions(&one_split(3, 1.0), 2).is_err());
}

#[test]
fn root_split_is_a_candidate() {
    let mut rng = seed::rng(21);
    for _ in 0..50 {
        let t = common::random_tree(&mut rng, 3, 4, 2);
        let Node::Split { feature, threshold, .. } = t.root() else { continue };
        let rs = tree_to_regions(&t, 3).unwrap();
        let cands = find_candidate_splits(&rs, &rs.domain);
        // the root line may be dead if one side collapsed, but then it cannot
        // separate anything
        let left_alive = rs.regions.iter().any(|r| r.bounds[*feature].upper <= *threshold);
        let right_alive = rs.regions.iter().any(|r| r.bounds[*feature].lower >= *threshold);
        if left_alive && right_alive {
            assert!(cands.contains(&(*feature, *threshold)));
        }
    }
}

#[test]
fn single_region_has_no_candidates() {
    let rs = tree_to_regions(&DecisionTree::leaf(vec![0.5, 0.5]).unwrap(), 2).unwrap();
    assert!(find_candidate_splits(&rs, &rs.domain).is_empty());
    let t = regions_to_tree(&rs, &mut seed::rng(0)).unwrap();
    assert_eq!(t.node_count(), 1);
}

#[test]
fn empty_set_cannot_be_rebuilt() {
    let rs = RegionSet::new(2, vec![Interval::UNBOUNDED; 2], vec![]).unwrap();
    assert!(regions_to_tree(&rs, &mut seed::rng(0)).is_err());
}

#[test]
fn tree_partitions_cover_and_agree() {
    let mut rng = seed::rng(3);
    for _ in 0..40 {
        let k = rng.gen_range(1..=4);
        let t = common::random_tree(&mut rng, k, 6, 3);
        let rs = tree_to_regions(&t, k).unwrap();
        for _ in 0..500 {
            let p = common::random_point(&mut rng, k);
            let owners: Vec<&Region> = rs.containing(&p).collect();
            assert_eq!(owners.len(), 1, "point {p:?}");
            assert_eq!(owners[0].distribution.as_slice(), t.distribution(&p));
        }
    }
}

#[test]
fn rebuilt_merges_agree_with_their_regions() {
    let mut rng = seed::rng(17);
    for _ in 0..40 {
        let k = rng.gen_range(1..=3);
        let a = tree_to_regions(&common::random_tree(&mut rng, k, 4, 3), k).unwrap();
        let b = tree_to_regions(&common::random_tree(&mut rng, k, 4, 3), k).unwrap();
        let m = merge_regions(&a, &b).unwrap();
        let rebuilt = rebuild_tree(&m, &mut rng).unwrap();
        for _ in 0..300 {
            let p = common::random_point(&mut rng, k);
            let owners: Vec<&Region> = m.containing(&p).collect();
            assert_eq!(owners.len(), 1);
            assert_eq!(rebuilt.tree.predict(&p).unwrap(), owners[0].class());
        }
    }
}

#[test]
fn self_merge_keeps_predictions() {
    let mut rng = seed::rng(8);
    for _ in 0..40 {
        let t = common::random_tree(&mut rng, 3, 5, 4);
        let rs = tree_to_regions(&t, 3).unwrap();
        let back = regions_to_tree(&merge_regions(&rs, &rs).unwrap(), &mut rng).unwrap();
        for _ in 0..300 {
            let p = common::random_point(&mut rng, 3);
            assert_eq!(back.predict(&p).unwrap(), argmax(t.distribution(&p)));
        }
    }
}

#[test]
fn json_round_trip() {
    let t = common::random_tree(&mut seed::rng(2), 2, 4, 2);
    let rs = tree_to_regions(&t, 2).unwrap();
    assert_eq!(RegionSet::from_json(&rs.to_json()).unwrap(), rs);
}

/// `n` slabs along x for each side, offset so each slab meets two others.
fn slabs(n: usize, offset: f64) -> RegionSet {
    let regions = (0..n)
        .map(|i| Region {
            bounds: vec![iv(i as f64 + offset, i as f64 + 1.0 + offset), iv(0.0, 1.0)],
            distribution: vec![0.5, 0.5],
        })
        .collect();
    RegionSet::new(2, vec![Interval::UNBOUNDED; 2], regions).unwrap()
}

fn best_of(runs: usize, mut f: impl FnMut()) -> Duration {
    (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .unwrap()
}

#[test]
fn sweep_scales_better_than_all_pairs() {
    let mut sweep = Vec::new();
    let mut naive = Vec::new();
    for n in [64, 256, 1024] {
        let (a, b) = (slabs(n, 0.0), slabs(n, 0.5));
        assert_eq!(merge_regions(&a, &b).unwrap().len(), 2 * n - 1);
        sweep.push(best_of(5, || drop(merge_regions(&a, &b).unwrap())).as_secs_f64());
        naive.push(best_of(5, || drop(naive_merge(&a, &b).unwrap())).as_secs_f64());
    }
    let sweep_growth = sweep[2] / sweep[0];
    let naive_growth = naive[2] / naive[0];
    eprintln!("sweep {sweep_growth:.1}x naive {naive_growth:.1}x");
    // quadratic growth over a 16x size step is 256x
    assert!(naive_growth > 60.0, "naive grew {naive_growth:.1}x");
    assert!(sweep_growth < naive_growth / 4.0, "sweep {sweep_growth:.1}x vs naive {naive_growth:.1}x");
    assert!(sweep[1] / sweep[0] < naive[1] / naive[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn merge_matches_the_oracle(s in any::<u64>(), k in 1usize..=4, na in 0usize..40, nb in 0usize..40) {
        let mut rng = seed::rng(s);
        let a = common::random_region_set(&mut rng, k, na, 3);
        let b = common::random_region_set(&mut rng, k, nb, 3);
        let fast = merge_regions(&a, &b).unwrap().canonical();
        let slow = naive_merge(&a, &b).unwrap().canonical();
        prop_assert!(fast.len() <= na * nb);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn merge_is_symmetric_up_to_order(s in any::<u64>(), k in 1usize..=3) {
        let mut rng = seed::rng(s);
        let a = tree_to_regions(&common::random_tree(&mut rng, k, 4, 2), k).unwrap();
        let b = tree_to_regions(&common::random_tree(&mut rng, k, 4, 2), k).unwrap();
        let ab = merge_regions(&a, &b).unwrap().canonical();
        let ba = merge_regions(&b, &a).unwrap().canonical();
        prop_assert_eq!(ab.len(), ba.len());
        for (x, y) in ab.regions.iter().zip(&ba.regions) {
            prop_assert_eq!(&x.bounds, &y.bounds);
            for (p, q) in x.distribution.iter().zip(&y.distribution) {
                prop_assert!((p - q).abs() < 1e-15);
            }
        }
    }
}
