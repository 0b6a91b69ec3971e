//! Isomorphism of small set families: invariant screens followed by a
//! complete backtracking search for a point bijection.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::block::{Block, PointId};
use crate::error::{Error, Result};
use crate::family::SetFamily;

/// Largest universe the search accepts.
pub const MAX_ISO_POINTS: usize = 32;

/// Default cap on search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Number of points of each degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeProfile(BTreeMap<usize, usize>);

impl DegreeProfile {
    /// `(degree, count)` pairs, highest degree first.
    pub fn entries(&self) -> Vec<(usize, usize)> {
        self.0.iter().rev().map(|(&d, &c)| (d, c)).collect()
    }

    pub fn count(&self, degree: usize) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    /// `Σ degree·count`, which equals the sum of the block sizes.
    pub fn incidences(&self) -> usize {
        self.0.iter().map(|(d, c)| d * c).sum()
    }
}

impl fmt::Display for DegreeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries().iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl FromIterator<(usize, usize)> for DegreeProfile {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        DegreeProfile(iter.into_iter().collect())
    }
}

pub fn degree_profile(family: &SetFamily) -> DegreeProfile {
    let mut map = BTreeMap::new();
    for d in family.degrees() {
        *map.entry(d).or_insert(0) += 1;
    }
    DegreeProfile(map)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsoResult {
    pub isomorphic: bool,
    /// Label of each point of the first family mapped to the second.
    pub mapping: Option<BTreeMap<String, String>>,
    /// The first invariant found to differ.
    pub separating_invariant: Option<String>,
}

impl IsoResult {
    fn separated(name: &str) -> Self {
        IsoResult {
            isomorphic: false,
            mapping: None,
            separating_invariant: Some(name.to_string()),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "isomorphic": self.isomorphic,
            "mapping": self.mapping,
            "separating_invariant": self.separating_invariant,
        })
    }
}

/// True iff `mapping` is a bijection from the points of `a` onto those of
/// `b` that carries the blocks of `a` exactly onto the blocks of `b`.
pub fn verify_mapping(a: &SetFamily, b: &SetFamily, mapping: &BTreeMap<String, String>) -> bool {
    if a.num_points() != b.num_points() || a.len() != b.len() || mapping.len() != a.num_points() {
        return false;
    }
    let mut image = vec![usize::MAX; a.num_points()];
    let mut hit = vec![false; b.num_points()];
    for (from, to) in mapping {
        let (Some(p), Some(q)) = (a.point(from), b.point(to)) else {
            return false;
        };
        if image[p.0] != usize::MAX || hit[q.0] {
            return false;
        }
        image[p.0] = q.0;
        hit[q.0] = true;
    }
    let mut mapped: Vec<Block> = a.blocks().iter().map(|blk| blk.remap(&image)).collect();
    mapped.sort_unstable();
    mapped == b.blocks()
}

fn block_sizes(f: &SetFamily) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for b in f.blocks() {
        *m.entry(b.len()).or_insert(0) += 1;
    }
    m
}

fn intersection_sizes(f: &SetFamily) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    let bs = f.blocks();
    for (i, a) in bs.iter().enumerate() {
        for b in &bs[i + 1..] {
            *m.entry(a.intersection(*b).len()).or_insert(0) += 1;
        }
    }
    m
}

pub fn are_isomorphic(a: &SetFamily, b: &SetFamily) -> Result<IsoResult> {
    are_isomorphic_with_budget(a, b, DEFAULT_NODE_BUDGET)
}

/// Decides isomorphism, giving up with `BudgetExceeded` after `budget`
/// search nodes.
pub fn are_isomorphic_with_budget(a: &SetFamily, b: &SetFamily, budget: u64) -> Result<IsoResult> {
    for f in [a, b] {
        if f.num_points() > MAX_ISO_POINTS {
            return Err(Error::BudgetExceeded {
                needed: format!("{} points", f.num_points()),
                budget: MAX_ISO_POINTS as u64,
            });
        }
    }
    if a.num_points() != b.num_points() {
        return Ok(IsoResult::separated("point_count"));
    }
    if a.len() != b.len() {
        return Ok(IsoResult::separated("block_count"));
    }
    if block_sizes(a) != block_sizes(b) {
        return Ok(IsoResult::separated("block_sizes"));
    }
    if degree_profile(a) != degree_profile(b) {
        return Ok(IsoResult::separated("degree_profile"));
    }
    if intersection_sizes(a) != intersection_sizes(b) {
        return Ok(IsoResult::separated("intersection_sizes"));
    }
    match Matcher::new(a, b, budget).solve()? {
        Some(image) => {
            let mapping: BTreeMap<String, String> = image
                .iter()
                .enumerate()
                .map(|(p, &q)| (a.label(PointId(p)).to_string(), b.label(PointId(q)).to_string()))
                .collect();
            debug_assert!(verify_mapping(a, b, &mapping));
            Ok(IsoResult {
                isomorphic: true,
                mapping: Some(mapping),
                separating_invariant: None,
            })
        }
        None => Ok(IsoResult::separated("exhaustive_search")),
    }
}

fn codegrees(f: &SetFamily) -> Vec<Vec<usize>> {
    let n = f.num_points();
    let mut m = vec![vec![0; n]; n];
    for b in f.blocks() {
        for p in b.iter() {
            for q in b.iter() {
                m[p.0][q.0] += 1;
            }
        }
    }
    m
}

struct Matcher<'a> {
    a_blocks: &'a [Block],
    b_blocks: HashSet<u128>,
    a_co: Vec<Vec<usize>>,
    b_co: Vec<Vec<usize>>,
    /// Points of `a` in search order.
    order: Vec<usize>,
    /// `closing[i]`: blocks of `a` whose last point in search order is `order[i]`.
    closing: Vec<Vec<Block>>,
    image: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl<'a> Matcher<'a> {
    fn new(a: &'a SetFamily, b: &SetFamily, budget: u64) -> Self {
        let n = a.num_points();
        let a_co = codegrees(a);
        let b_co = codegrees(b);
        // most constrained first: high degree, then most ties to placed points
        let mut order = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for _ in 0..n {
            let next = (0..n)
                .filter(|&p| !placed[p])
                .max_by_key(|&p| {
                    let ties = order.iter().filter(|&&q: &&usize| a_co[p][q] > 0).count();
                    (ties, a_co[p][p], std::cmp::Reverse(p))
                })
                .expect("unplaced point");
            placed[next] = true;
            order.push(next);
        }
        let mut rank = vec![0; n];
        for (i, &p) in order.iter().enumerate() {
            rank[p] = i;
        }
        let mut closing = vec![Vec::new(); n];
        for &blk in a.blocks() {
            let last = blk.iter().map(|p| rank[p.0]).max().expect("nonempty block");
            closing[last].push(blk);
        }
        Matcher {
            a_blocks: a.blocks(),
            b_blocks: b.blocks().iter().map(|b| b.bits()).collect(),
            a_co,
            b_co,
            order,
            closing,
            image: vec![usize::MAX; n],
            used: vec![false; n],
            nodes: 0,
            budget,
        }
    }

    fn solve(mut self) -> Result<Option<Vec<usize>>> {
        debug_assert_eq!(self.a_blocks.len(), self.b_blocks.len());
        if self.descend(0)? {
            Ok(Some(self.image))
        } else {
            Ok(None)
        }
    }

    fn descend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                needed: "more search nodes".into(),
                budget: self.budget,
            });
        }
        let p = self.order[depth];
        for q in 0..self.b_co.len() {
            if self.used[q] || !self.compatible(depth, p, q) {
                continue;
            }
            self.image[p] = q;
            self.used[q] = true;
            if self.closes(depth) && self.descend(depth + 1)? {
                return Ok(true);
            }
            self.used[q] = false;
            self.image[p] = usize::MAX;
        }
        Ok(false)
    }

    fn compatible(&self, depth: usize, p: usize, q: usize) -> bool {
        self.a_co[p][p] == self.b_co[q][q]
            && self.order[..depth]
                .iter()
                .all(|&r| self.a_co[p][r] == self.b_co[q][self.image[r]])
    }

    /// Every block completed by the latest assignment lands on a block.
    fn closes(&self, depth: usize) -> bool {
        self.closing[depth]
            .iter()
            .all(|blk| self.b_blocks.contains(&blk.remap(&self.image).bits()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn profile_display() {
        let t = mif_triangle();
        assert_eq!(degree_profile(&t).to_string(), "{2:3}");
        let p: DegreeProfile = [(10, 2), (26, 3), (14, 5)].into_iter().collect();
        assert_eq!(p.to_string(), "{26:3, 14:5, 10:2}");
        assert_eq!(p.incidences(), 78 + 70 + 20);
    }

    #[test]
    fn triangle_vs_path() {
        let path = SetFamily::new(vec!["a", "b", "c"], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r = are_isomorphic(&mif_triangle(), &path).unwrap();
        assert!(!r.isomorphic);
        assert_eq!(r.separating_invariant.as_deref(), Some("block_count"));
    }

    #[test]
    fn relabeled_copy_is_isomorphic() {
        let f = circular_g(5, 3).unwrap();
        let n = f.num_points();
        let g = f
            .relabeled(|l| {
                let i = f.point(l.as_str()).unwrap().0;
                crate::Label::new(format!("p{:02}", i * 7 % n)).unwrap()
            })
            .unwrap();
        assert_ne!(f.blocks(), g.blocks());
        let r = are_isomorphic(&f, &g).unwrap();
        assert!(r.isomorphic);
        assert!(verify_mapping(&f, &g, r.mapping.as_ref().unwrap()));
    }

    #[test]
    fn verify_mapping_rejects_non_isomorphisms() {
        let t = mif_triangle();
        let path = SetFamily::new(vec!["a", "b", "c"], vec![vec![0, 1], vec![1, 2]]).unwrap();
        let id: BTreeMap<String, String> = ["a", "b", "c"].iter().map(|s| (s.to_string(), s.to_string())).collect();
        assert!(verify_mapping(&t, &t, &id));
        assert!(!verify_mapping(&t, &path, &id));
        let mut collapse = id.clone();
        collapse.insert("c".into(), "a".into());
        assert!(!verify_mapping(&t, &t, &collapse));
    }

    #[test]
    fn same_invariants_different_structure() {
        // two 2-regular graphs on 6 vertices: a hexagon and two triangles
        let hex = SetFamily::new(
            vec!["0", "1", "2", "3", "4", "5"],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![0, 5]],
        )
        .unwrap();
        let two = SetFamily::new(
            vec!["0", "1", "2", "3", "4", "5"],
            vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4], vec![4, 5], vec![3, 5]],
        )
        .unwrap();
        let r = are_isomorphic(&hex, &two).unwrap();
        assert!(!r.isomorphic);
        assert_eq!(r.separating_invariant.as_deref(), Some("exhaustive_search"));
    }

    #[test]
    fn budget() {
        let big = complete_cif(33, 1).unwrap();
        assert!(matches!(are_isomorphic(&big, &big), Err(Error::BudgetExceeded { .. })));
    }
}
