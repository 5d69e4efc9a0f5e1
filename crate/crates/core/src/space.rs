//! Decision-space geometry.
//!
//! A tree partitions feature space into axis-aligned boxes, one per leaf.
//! Two such partitions are merged by intersecting their boxes, and a merged
//! partition is turned back into a tree by repeatedly choosing a hyperplane
//! that crosses the current box without cutting any region.
//!
//! Intervals are half-open, `(lower, upper]`, matching the tree's
//! `x <= threshold` goes-left rule.

use std::cmp::Ordering;

use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{argmax, check_distribution, DecisionTree, Node};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub const UNBOUNDED: Interval = Interval {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Self {
        Interval { lower, upper }
    }

    pub fn is_empty(&self) -> bool {
        !(self.lower < self.upper)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x <= self.upper
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lower: self.lower.max(other.lower),
            upper: self.upper.min(other.upper),
        }
    }

    /// True when the interiors overlap.
    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lower.max(other.lower) < self.upper.min(other.upper)
    }

    fn total_cmp(&self, other: &Interval) -> Ordering {
        self.lower
            .total_cmp(&other.lower)
            .then(self.upper.total_cmp(&other.upper))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Bound {
    Finite(f64),
    Sentinel(String),
}

fn bound_out(x: f64) -> Bound {
    if x == f64::INFINITY {
        Bound::Sentinel("inf".into())
    } else if x == f64::NEG_INFINITY {
        Bound::Sentinel("-inf".into())
    } else {
        Bound::Finite(x)
    }
}

fn bound_in<E: de::Error>(b: Bound) -> std::result::Result<f64, E> {
    match b {
        Bound::Finite(x) => Ok(x),
        Bound::Sentinel(s) if s == "inf" => Ok(f64::INFINITY),
        Bound::Sentinel(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
        Bound::Sentinel(s) => Err(E::custom(format!("bad bound '{s}'"))),
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (bound_out(self.lower), bound_out(self.upper)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (lo, hi) = <(Bound, Bound)>::deserialize(d)?;
        Ok(Interval {
            lower: bound_in(lo)?,
            upper: bound_in(hi)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub bounds: Vec<Interval>,
    pub distribution: Vec<f64>,
}

impl Region {
    pub fn contains(&self, point: &[f64]) -> bool {
        self.bounds.iter().zip(point).all(|(b, &x)| b.contains(x))
    }

    pub fn class(&self) -> usize {
        argmax(&self.distribution)
    }

    /// Intersection with `other`, or `None` when the interior is empty.
    pub fn intersect_bounds(&self, other: &[Interval]) -> Option<Vec<Interval>> {
        let mut out = Vec::with_capacity(self.bounds.len());
        for (a, b) in self.bounds.iter().zip(other) {
            let c = a.intersect(b);
            if c.is_empty() {
                return None;
            }
            out.push(c);
        }
        Some(out)
    }

    fn canonical_cmp(&self, other: &Region) -> Ordering {
        for (a, b) in self.bounds.iter().zip(&other.bounds) {
            let o = a.total_cmp(b);
            if o != Ordering::Equal {
                return o;
            }
        }
        for (a, b) in self.distribution.iter().zip(&other.distribution) {
            let o = a.total_cmp(b);
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

/// A decision space: interior-disjoint regions covering `domain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSet {
    pub dim: usize,
    pub domain: Vec<Interval>,
    pub regions: Vec<Region>,
}

impl RegionSet {
    /// Checks per-region invariants. Disjointness and coverage are not
    /// verified here.
    pub fn new(dim: usize, domain: Vec<Interval>, regions: Vec<Region>) -> Result<Self> {
        if domain.len() != dim {
            return Err(Error::validation(format!(
                "domain has {} dimensions, expected {dim}",
                domain.len()
            )));
        }
        let n_classes = regions.first().map(|r| r.distribution.len());
        for r in &regions {
            if r.bounds.len() != dim {
                return Err(Error::validation("region dimension mismatch"));
            }
            if r.bounds.iter().any(Interval::is_empty) {
                return Err(Error::validation("region with an empty interval"));
            }
            check_distribution(&r.distribution, n_classes.unwrap_or(0))?;
        }
        Ok(RegionSet {
            dim,
            domain,
            regions,
        })
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn n_classes(&self) -> Option<usize> {
        self.regions.first().map(|r| r.distribution.len())
    }

    pub fn containing(&self, point: &[f64]) -> impl Iterator<Item = &Region> + '_ {
        let point = point.to_vec();
        self.regions.iter().filter(move |r| r.contains(&point))
    }

    /// Sorts regions lexicographically by bounds, then distribution.
    pub fn canonicalize(&mut self) {
        self.regions.sort_by(Region::canonical_cmp);
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("region set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RegionSet = serde_json::from_str(text)?;
        RegionSet::new(raw.dim, raw.domain, raw.regions)
    }
}

pub fn tree_to_regions(tree: &DecisionTree, k: usize) -> Result<RegionSet> {
    if let Some(f) = tree.max_feature() {
        if f >= k {
            return Err(Error::validation(format!(
                "tree tests feature {f} but the space has {k} dimensions"
            )));
        }
    }
    fn walk(node: &Node, bounds: &mut Vec<Interval>, out: &mut Vec<Region>) {
        match node {
            Node::Leaf { distribution } => out.push(Region {
                bounds: bounds.clone(),
                distribution: distribution.clone(),
            }),
            Node::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                let saved = bounds[*feature];
                // A threshold outside the current box leaves one side empty.
                if *threshold > saved.lower {
                    bounds[*feature].upper = threshold.min(saved.upper);
                    walk(left, bounds, out);
                }
                bounds[*feature] = saved;
                if *threshold < saved.upper {
                    bounds[*feature].lower = threshold.max(saved.lower);
                    walk(right, bounds, out);
                }
                bounds[*feature] = saved;
            }
        }
    }
    let domain = vec![Interval::UNBOUNDED; k];
    let mut regions = Vec::with_capacity(tree.node_count() / 2 + 1);
    walk(tree.root(), &mut domain.clone(), &mut regions);
    Ok(RegionSet {
        dim: k,
        domain,
        regions,
    })
}

fn check_compatible(a: &RegionSet, b: &RegionSet) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::validation(format!(
            "cannot merge spaces of dimension {} and {}",
            a.dim, b.dim
        )));
    }
    if let (Some(ca), Some(cb)) = (a.n_classes(), b.n_classes()) {
        if ca != cb {
            return Err(Error::validation(format!(
                "cannot merge spaces over {ca} and {cb} classes"
            )));
        }
    }
    Ok(())
}

fn merged_region(ra: &Region, rb: &Region) -> Option<Region> {
    let bounds = ra.intersect_bounds(&rb.bounds)?;
    let distribution = ra
        .distribution
        .iter()
        .zip(&rb.distribution)
        .map(|(p, q)| (p + q) / 2.0)
        .collect();
    Some(Region {
        bounds,
        distribution,
    })
}

fn domain_intersection(a: &RegionSet, b: &RegionSet) -> Vec<Interval> {
    a.domain
        .iter()
        .zip(&b.domain)
        .map(|(x, y)| x.intersect(y))
        .collect()
}

/// All-pairs intersection. Reference implementation for [`merge_regions`].
pub fn naive_merge(a: &RegionSet, b: &RegionSet) -> Result<RegionSet> {
    check_compatible(a, b)?;
    let mut regions = Vec::new();
    for ra in &a.regions {
        for rb in &b.regions {
            if let Some(r) = merged_region(ra, rb) {
                regions.push(r);
            }
        }
    }
    let mut out = RegionSet {
        dim: a.dim,
        domain: domain_intersection(a, b),
        regions,
    };
    out.canonicalize();
    Ok(out)
}

/// Number of `(i, j)` pairs whose projections on one axis overlap, from
/// sorted endpoints only.
fn overlap_count(a: &[Interval], b: &[Interval]) -> u128 {
    let mut a_upper: Vec<f64> = a.iter().map(|i| i.upper).collect();
    let mut b_upper: Vec<f64> = b.iter().map(|i| i.upper).collect();
    a_upper.sort_by(f64::total_cmp);
    b_upper.sort_by(f64::total_cmp);
    // pairs with a.upper <= b.lower, and b.upper <= a.lower, are disjoint
    let a_before: u128 = b
        .iter()
        .map(|j| a_upper.partition_point(|&u| u <= j.lower) as u128)
        .sum();
    let b_before: u128 = a
        .iter()
        .map(|i| b_upper.partition_point(|&u| u <= i.lower) as u128)
        .sum();
    (a.len() as u128 * b.len() as u128) - a_before - b_before
}

/// Pairs `(i, j)` with overlapping interiors, by a sweep over lower ends.
/// Work is `O(n log n + pairs)`.
fn sweep_pairs(a: &[Interval], b: &[Interval]) -> Vec<(usize, usize)> {
    #[derive(Clone, Copy)]
    enum Side {
        A,
        B,
    }
    let mut events: Vec<(f64, Side, usize)> = a
        .iter()
        .enumerate()
        .map(|(i, iv)| (iv.lower, Side::A, i))
        .chain(b.iter().enumerate().map(|(j, iv)| (iv.lower, Side::B, j)))
        .collect();
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut active_a: Vec<usize> = Vec::new();
    let mut active_b: Vec<usize> = Vec::new();
    let mut pairs = Vec::new();
    for (lower, side, idx) in events {
        match side {
            Side::A => {
                // every survivor starts at or before `lower` and ends after it
                active_b.retain(|&j| b[j].upper > lower);
                pairs.extend(active_b.iter().map(|&j| (idx, j)));
                active_a.push(idx);
            }
            Side::B => {
                active_a.retain(|&i| a[i].upper > lower);
                pairs.extend(active_a.iter().map(|&i| (i, idx)));
                active_b.push(idx);
            }
        }
    }
    pairs
}

/// Intersects two decision spaces. Each output region is a nonempty
/// `ra ∩ rb` carrying the mean of the two parent distributions.
///
/// Candidate pairs come from a sweep along the axis whose projected
/// intervals overlap least (counted from sorted endpoints), then get checked
/// on the remaining axes.
pub fn merge_regions(a: &RegionSet, b: &RegionSet) -> Result<RegionSet> {
    check_compatible(a, b)?;
    let domain = domain_intersection(a, b);
    let mut regions = Vec::new();
    if !a.is_empty() && !b.is_empty() && a.dim > 0 {
        let project = |rs: &RegionSet, d: usize| -> Vec<Interval> {
            rs.regions.iter().map(|r| r.bounds[d]).collect()
        };
        let axis = (0..a.dim)
            .map(|d| (overlap_count(&project(a, d), &project(b, d)), d))
            .min()
            .map(|(_, d)| d)
            .expect("dim > 0");
        for (i, j) in sweep_pairs(&project(a, axis), &project(b, axis)) {
            if let Some(r) = merged_region(&a.regions[i], &b.regions[j]) {
                regions.push(r);
            }
        }
    } else if a.dim == 0 {
        for ra in &a.regions {
            for rb in &b.regions {
                regions.extend(merged_region(ra, rb));
            }
        }
    }
    let mut out = RegionSet {
        dim: a.dim,
        domain,
        regions,
    };
    out.canonicalize();
    Ok(out)
}

fn clip_all(regions: &[Region], bbox: &[Interval]) -> Vec<Region> {
    regions
        .iter()
        .filter_map(|r| {
            r.intersect_bounds(bbox).map(|bounds| Region {
                bounds,
                distribution: r.distribution.clone(),
            })
        })
        .collect()
}

/// For each finite facet coordinate strictly inside `bbox` on axis `d`,
/// the number of regions whose interior it would cut, and whether both
/// sides of it hold a region.
fn facet_cuts(regions: &[Region], bbox: &[Interval], d: usize) -> Vec<(f64, usize, bool)> {
    let mut lowers: Vec<f64> = regions.iter().map(|r| r.bounds[d].lower).collect();
    let mut uppers: Vec<f64> = regions.iter().map(|r| r.bounds[d].upper).collect();
    lowers.sort_by(f64::total_cmp);
    uppers.sort_by(f64::total_cmp);
    let inside = |v: &f64| v.is_finite() && bbox[d].lower < *v && *v < bbox[d].upper;
    let mut values: Vec<f64> = lowers
        .iter()
        .chain(&uppers)
        .copied()
        .filter(inside)
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
        .into_iter()
        .map(|v| {
            let starts_before = lowers.partition_point(|&l| l < v);
            let ends_by = uppers.partition_point(|&u| u <= v);
            // something lies left iff a region starts below v; right iff one ends above v
            let two_sided = starts_before > 0 && ends_by < uppers.len();
            (v, starts_before - ends_by, two_sided)
        })
        .collect()
}

fn clean_candidates(regions: &[Region], bbox: &[Interval]) -> Vec<(usize, f64)> {
    (0..bbox.len())
        .flat_map(|d| {
            facet_cuts(regions, bbox, d)
                .into_iter()
                .filter(|&(_, cuts, two_sided)| cuts == 0 && two_sided)
                .map(move |(v, _, _)| (d, v))
        })
        .collect()
}

/// Hyperplanes `x_d = v` taken from region facets inside `bbox` that cross
/// the whole box without cutting any region clipped to it.
pub fn find_candidate_splits(rs: &RegionSet, bbox: &[Interval]) -> Vec<(usize, f64)> {
    clean_candidates(&clip_all(&rs.regions, bbox), bbox)
}

#[derive(Debug, Clone)]
pub struct Rebuild {
    pub tree: DecisionTree,
    /// Splits that had to cut through regions because no clean hyperplane
    /// existed.
    pub fallback_splits: usize,
}

struct Builder<'a, R> {
    rng: &'a mut R,
    fallback_splits: usize,
}

fn mean_distribution(regions: &[Region]) -> Vec<f64> {
    let n = regions[0].distribution.len();
    let mut acc = vec![0.0; n];
    for r in regions {
        for (a, p) in acc.iter_mut().zip(&r.distribution) {
            *a += p;
        }
    }
    let total: f64 = acc.iter().sum();
    acc.iter_mut().for_each(|a| *a /= total);
    acc
}

impl<R: Rng> Builder<'_, R> {
    fn build(&mut self, regions: Vec<Region>, bbox: Vec<Interval>) -> Node {
        let class = regions[0].class();
        if regions.len() == 1 || regions.iter().all(|r| r.class() == class) {
            return Node::leaf(mean_distribution(&regions));
        }
        let candidates = clean_candidates(&regions, &bbox);
        let (axis, value) = if candidates.is_empty() {
            let fallback = (0..bbox.len())
                .flat_map(|d| {
                    facet_cuts(&regions, &bbox, d)
                        .into_iter()
                        .filter(|c| c.2)
                        .map(move |(v, cuts, _)| (cuts, d, v))
                })
                .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.total_cmp(&y.2)));
            match fallback {
                Some((_, d, v)) => {
                    self.fallback_splits += 1;
                    (d, v)
                }
                None => return Node::leaf(mean_distribution(&regions)),
            }
        } else {
            candidates[self.rng.gen_range(0..candidates.len())]
        };

        let mut left_box = bbox.clone();
        left_box[axis].upper = value;
        let mut right_box = bbox;
        right_box[axis].lower = value;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for r in regions {
            let iv = r.bounds[axis];
            if iv.upper <= value {
                left.push(r);
            } else if iv.lower >= value {
                right.push(r);
            } else {
                let mut lo = r.clone();
                lo.bounds[axis].upper = value;
                let mut hi = r;
                hi.bounds[axis].lower = value;
                left.push(lo);
                right.push(hi);
            }
        }
        let l = self.build(left, left_box);
        let r = self.build(right, right_box);
        Node::split(axis, value, l, r)
    }
}

/// Rebuilds a tree from a decision space, choosing uniformly among clean
/// hyperplanes at every node.
pub fn rebuild_tree<R: Rng>(rs: &RegionSet, rng: &mut R) -> Result<Rebuild> {
    let Some(n_classes) = rs.n_classes() else {
        return Err(Error::validation("cannot build a tree from an empty region set"));
    };
    let regions = clip_all(&rs.regions, &rs.domain);
    if regions.is_empty() {
        return Err(Error::validation("no region overlaps the domain"));
    }
    let mut builder = Builder {
        rng,
        fallback_splits: 0,
    };
    let root = builder.build(regions, rs.domain.clone());
    Ok(Rebuild {
        tree: DecisionTree::new(root, n_classes)?,
        fallback_splits: builder.fallback_splits,
    })
}

pub fn regions_to_tree<R: Rng>(rs: &RegionSet, rng: &mut R) -> Result<DecisionTree> {
    rebuild_tree(rs, rng).map(|r| r.tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    const INF: f64 = f64::INFINITY;

    fn region(bounds: Vec<Interval>, class: usize) -> Region {
        let mut distribution = vec![0.1, 0.1];
        distribution[class] = 0.9;
        Region {
            bounds,
            distribution,
        }
    }

    fn halves(at: f64) -> RegionSet {
        RegionSet::new(
            1,
            vec![Interval::UNBOUNDED],
            vec![region(vec![iv(-INF, at)], 0), region(vec![iv(at, INF)], 1)],
        )
        .unwrap()
    }

    #[test]
    fn leaf_becomes_unbounded_region() {
        let t = DecisionTree::leaf(vec![0.5, 0.5]).unwrap();
        let rs = tree_to_regions(&t, 2).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs.regions[0].bounds, vec![Interval::UNBOUNDED; 2]);
    }

    #[test]
    fn stump_becomes_two_halves() {
        let t = DecisionTree::new(
            Node::split(0, 5.0, Node::leaf(vec![0.9, 0.1]), Node::leaf(vec![0.1, 0.9])),
            2,
        )
        .unwrap();
        let rs = tree_to_regions(&t, 1).unwrap();
        assert_eq!(rs, halves(5.0));
        assert!(tree_to_regions(&t, 0).is_err());
    }

    #[test]
    fn interval_overlay_1d() {
        let merged = merge_regions(&halves(5.0), &halves(3.0)).unwrap();
        let bounds: Vec<Interval> = merged.regions.iter().map(|r| r.bounds[0]).collect();
        assert_eq!(bounds, vec![iv(-INF, 3.0), iv(3.0, 5.0), iv(5.0, INF)]);
        // (3, 5] is class 0 on one side and class 1 on the other
        assert_eq!(merged.regions[1].distribution, vec![0.5, 0.5]);
        assert_eq!(merged, naive_merge(&halves(5.0), &halves(3.0)).unwrap());
    }

    #[test]
    fn self_merge_keeps_geometry() {
        let x = halves(2.0);
        assert_eq!(merge_regions(&x, &x).unwrap(), x.clone().canonical());
    }

    #[test]
    fn dimension_mismatch() {
        let two_d = RegionSet::new(2, vec![Interval::UNBOUNDED; 2], vec![]).unwrap();
        assert!(merge_regions(&halves(1.0), &two_d).is_err());
        assert!(naive_merge(&halves(1.0), &two_d).is_err());
    }

    #[test]
    fn candidates_for_two_halves() {
        let rs = halves(3.0);
        assert_eq!(find_candidate_splits(&rs, &rs.domain), vec![(0, 3.0)]);
    }

    #[test]
    fn candidates_for_crossed_overlay() {
        let x = RegionSet::new(
            2,
            vec![Interval::UNBOUNDED; 2],
            vec![
                region(vec![iv(-INF, 3.0), Interval::UNBOUNDED], 0),
                region(vec![iv(3.0, INF), Interval::UNBOUNDED], 1),
            ],
        )
        .unwrap();
        let y = RegionSet::new(
            2,
            vec![Interval::UNBOUNDED; 2],
            vec![
                region(vec![Interval::UNBOUNDED, iv(-INF, 7.0)], 0),
                region(vec![Interval::UNBOUNDED, iv(7.0, INF)], 1),
            ],
        )
        .unwrap();
        let merged = merge_regions(&x, &y).unwrap();
        assert_eq!(merged.len(), 4);
        assert_eq!(
            find_candidate_splits(&merged, &merged.domain),
            vec![(0, 3.0), (1, 7.0)]
        );
    }

    #[test]
    fn single_region_rebuilds_to_leaf() {
        let rs = RegionSet::new(
            1,
            vec![Interval::UNBOUNDED],
            vec![region(vec![Interval::UNBOUNDED], 1)],
        )
        .unwrap();
        let t = regions_to_tree(&rs, &mut seed::rng(0)).unwrap();
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.distribution(&[0.0]), &[0.1, 0.9]);

        let empty = RegionSet::new(1, vec![Interval::UNBOUNDED], vec![]).unwrap();
        assert!(regions_to_tree(&empty, &mut seed::rng(0)).is_err());
    }

    #[test]
    fn pinwheel_needs_fallback() {
        // Four rectangles around a centre square: no axis line crosses the
        // whole box cleanly.
        let b = |x0: f64, x1: f64, y0: f64, y1: f64| vec![iv(x0, x1), iv(y0, y1)];
        let regions = vec![
            region(b(0.0, 2.0, 0.0, 1.0), 0),
            region(b(2.0, 3.0, 0.0, 2.0), 1),
            region(b(1.0, 3.0, 2.0, 3.0), 0),
            region(b(0.0, 1.0, 1.0, 3.0), 1),
            region(b(1.0, 2.0, 1.0, 2.0), 0),
        ];
        let rs = RegionSet::new(2, b(0.0, 3.0, 0.0, 3.0), regions).unwrap();
        assert!(find_candidate_splits(&rs, &rs.domain).is_empty());
        let rebuilt = rebuild_tree(&rs, &mut seed::rng(4)).unwrap();
        assert!(rebuilt.fallback_splits >= 1);
        for i in 0..30 {
            for j in 0..30 {
                let p = [0.05 + i as f64 * 0.1, 0.05 + j as f64 * 0.1];
                let owner: Vec<&Region> = rs.containing(&p).collect();
                assert_eq!(owner.len(), 1);
                assert_eq!(rebuilt.tree.predict(&p).unwrap(), owner[0].class());
            }
        }
    }

    #[test]
    fn json_dump_uses_sentinels() {
        let rs = halves(1.5);
        let text = rs.to_json();
        assert!(text.contains("\"-inf\"") && text.contains("\"inf\""));
        assert_eq!(RegionSet::from_json(&text).unwrap(), rs);
        assert!(RegionSet::from_json(&text.replace("\"inf\"", "\"huge\"")).is_err());
    }
}
