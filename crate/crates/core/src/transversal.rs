//! Exact blocking-set machinery: `τ`, the transversal family `F^⊤`, and
//! exhaustive enumeration of blocking sets of a given size.
//!
//! The searches work on raw [`Block`] slices; the [`SetFamily`] wrappers
//! attach labels to the results.

use rayon::prelude::*;

use crate::block::{Block, PointId};
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::properties::{Property, PropertyVerdict, Witness};

/// `τ(F)` together with every minimum blocking set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalReport {
    pub tau: usize,
    /// Canonical family over the points of the source that transversals use.
    pub transversals: SetFamily,
}

pub fn is_blocking(set: Block, family: &SetFamily) -> bool {
    blocks_all(set, family.blocks())
}

/// True iff `set` meets every block.
pub fn blocks_all(set: Block, blocks: &[Block]) -> bool {
    blocks.iter().all(|b| b.meets(set))
}

pub fn tau(family: &SetFamily) -> Result<usize> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(min_blocking_size(family.blocks()))
}

pub fn transversals(family: &SetFamily) -> Result<TransversalReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let (tau, sets) = minimum_blocking_sets(family.blocks());
    let transversals = SetFamily::from_blocks(family.labels().to_vec(), sets)?;
    Ok(TransversalReport { tau, transversals })
}

/// All `size`-subsets of the point set that block every block, in
/// canonical order.
pub fn blocking_sets_of_size(family: &SetFamily, size: usize) -> Result<SetFamily> {
    if size > family.num_points() {
        return Err(Error::InvalidParams(format!(
            "blocking set size {size} exceeds the {} points of the family",
            family.num_points()
        )));
    }
    let sets = blocking_sets(family.blocks(), family.num_points(), size);
    SetFamily::from_blocks(family.labels().to_vec(), sets)
}

/// Checks the `k^k` ceiling on the size of a uniform family.
pub fn check_upper_bound(family: &SetFamily) -> Result<PropertyVerdict> {
    let k = family.uniform_k().ok_or(Error::NotUniform)?;
    let size = family.len() as u128;
    let (holds, ceiling) = match (k as u128).checked_pow(k as u32) {
        Some(c) => (size <= c, c.to_string()),
        None => (true, format!("{k}^{k}")),
    };
    let detail = format!(
        "{size} {} {ceiling}: {}",
        if holds { "≤" } else { ">" },
        if holds { "pass" } else { "fail" }
    );
    Ok(PropertyVerdict {
        property: Property::UpperBound,
        holds,
        witness: (!holds).then(|| Witness::Count(family.len())),
        detail,
    })
}

/// Size of a smallest set meeting every block.
///
/// Branch and bound: branch on the unhit block with the fewest usable
/// points (earlier points of that block are excluded in later branches),
/// bounded below by a greedy packing of pairwise disjoint unhit blocks.
/// An empty slice has `τ = 0`.
pub fn min_blocking_size(blocks: &[Block]) -> usize {
    let blocks = by_size(blocks);
    let mut search = MinSearch {
        blocks: &blocks,
        best: greedy_upper_bound(&blocks),
    };
    search.run(Block::EMPTY, Block::EMPTY, 0);
    search.best
}

/// `τ` and every blocking set of that size, in canonical order.
pub fn minimum_blocking_sets(blocks: &[Block]) -> (usize, Vec<Block>) {
    let tau = min_blocking_size(blocks);
    let sorted = by_size(blocks);
    let mut found = Vec::new();
    enumerate(&sorted, tau, Block::EMPTY, Block::EMPTY, 0, &mut found);
    found.sort_unstable();
    (tau, found)
}

/// Every `size`-subset of points `0..universe` that meets every block.
///
/// Candidates are generated in lexicographic order and a prefix is
/// abandoned once some unhit block has no point left at or after the next
/// candidate position. The first point splits the work across threads;
/// the merged output keeps the sequential order.
pub fn blocking_sets(blocks: &[Block], universe: usize, size: usize) -> Vec<Block> {
    if size > universe {
        return Vec::new();
    }
    if size == 0 {
        return if blocks.is_empty() { vec![Block::EMPTY] } else { Vec::new() };
    }
    // sort by last point so "hopeless" blocks form a prefix
    let mut sorted: Vec<Block> = blocks.to_vec();
    sorted.sort_by_key(|b| b.last().map_or(0, PointId::index));
    let sweep = Sweep {
        blocks: &sorted,
        universe,
        size,
    };
    (0..=universe - size)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let chosen = Block::singleton(PointId(first));
            if sweep.viable(chosen, first + 1) {
                sweep.extend(chosen, first + 1, 1, &mut out);
            }
            out
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

struct Sweep<'a> {
    blocks: &'a [Block],
    universe: usize,
    size: usize,
}

impl Sweep<'_> {
    /// False if an unhit block lies entirely before `next`.
    fn viable(&self, chosen: Block, next: usize) -> bool {
        for b in self.blocks {
            match b.last() {
                Some(last) if last.0 < next => {
                    if !b.meets(chosen) {
                        return false;
                    }
                }
                _ => break,
            }
        }
        true
    }

    fn extend(&self, chosen: Block, next: usize, depth: usize, out: &mut Vec<Block>) {
        if depth == self.size {
            if blocks_all(chosen, self.blocks) {
                out.push(chosen);
            }
            return;
        }
        for p in next..=self.universe - (self.size - depth) {
            let c = chosen.with(PointId(p));
            if self.viable(c, p + 1) {
                self.extend(c, p + 1, depth + 1, out);
            }
        }
    }
}

fn by_size(blocks: &[Block]) -> Vec<Block> {
    let mut v = blocks.to_vec();
    v.sort_by_key(|b| b.len());
    v
}

fn greedy_upper_bound(blocks: &[Block]) -> usize {
    let mut chosen = Block::EMPTY;
    let mut count = 0;
    for b in blocks {
        if !b.meets(chosen) {
            chosen = chosen.with(b.first().expect("nonempty block"));
            count += 1;
        }
    }
    count
}

/// Unhit block with the fewest usable points; `Err(())` if one has none.
fn branch_block(blocks: &[Block], chosen: Block, forbidden: Block) -> Result<Option<Block>, ()> {
    let mut best: Option<Block> = None;
    for b in blocks {
        if b.meets(chosen) {
            continue;
        }
        let avail = b.difference(forbidden);
        if avail.is_empty() {
            return Err(());
        }
        if best.map_or(true, |cur| avail.len() < cur.len()) {
            best = Some(avail);
        }
    }
    Ok(best)
}

/// Greedy count of unhit blocks with pairwise disjoint usable parts.
fn packing_bound(blocks: &[Block], chosen: Block, forbidden: Block) -> usize {
    let mut used = Block::EMPTY;
    let mut count = 0;
    for b in blocks {
        if b.meets(chosen) {
            continue;
        }
        let avail = b.difference(forbidden);
        if avail.is_disjoint(used) {
            used = used.union(avail);
            count += 1;
        }
    }
    count
}

struct MinSearch<'a> {
    blocks: &'a [Block],
    best: usize,
}

impl MinSearch<'_> {
    fn run(&mut self, chosen: Block, forbidden: Block, depth: usize) {
        let Ok(branch) = branch_block(self.blocks, chosen, forbidden) else {
            return;
        };
        let Some(avail) = branch else {
            self.best = self.best.min(depth);
            return;
        };
        if depth + packing_bound(self.blocks, chosen, forbidden) >= self.best {
            return;
        }
        let mut excluded = forbidden;
        for p in avail.iter() {
            self.run(chosen.with(p), excluded, depth + 1);
            excluded = excluded.with(p);
        }
    }
}

fn enumerate(
    blocks: &[Block],
    limit: usize,
    chosen: Block,
    forbidden: Block,
    depth: usize,
    out: &mut Vec<Block>,
) {
    let Ok(branch) = branch_block(blocks, chosen, forbidden) else {
        return;
    };
    let Some(avail) = branch else {
        if depth == limit {
            out.push(chosen);
        }
        return;
    };
    if depth + packing_bound(blocks, chosen, forbidden) > limit {
        return;
    }
    let mut excluded = forbidden;
    for p in avail.iter() {
        enumerate(blocks, limit, chosen.with(p), excluded, depth + 1, out);
        excluded = excluded.with(p);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> SetFamily {
        SetFamily::new(vec!["a", "b", "c"], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    /// Every subset of the universe, smallest first.
    fn powerset_oracle(blocks: &[Block], n: usize) -> (usize, Vec<Block>) {
        let mut best = usize::MAX;
        let mut sets = Vec::new();
        for bits in 0u128..(1u128 << n) {
            let c = Block::from_bits(bits);
            if !blocks.iter().all(|b| b.meets(c)) {
                continue;
            }
            match c.len().cmp(&best) {
                std::cmp::Ordering::Less => {
                    best = c.len();
                    sets = vec![c];
                }
                std::cmp::Ordering::Equal => sets.push(c),
                std::cmp::Ordering::Greater => {}
            }
        }
        sets.sort();
        (best, sets)
    }

    #[test]
    fn triangle_tau_matches_brute_force() {
        let t = triangle();
        assert_eq!(tau(&t).unwrap(), 2);
        assert_eq!(powerset_oracle(t.blocks(), 3).0, 2);
    }

    #[test]
    fn blocking_basics() {
        let t = triangle();
        assert!(t.blocks().iter().all(|&b| is_blocking(b, &t)));
        assert!(!is_blocking(Block::EMPTY, &t));
    }

    #[test]
    fn triangle_blocking_pairs_are_its_edges() {
        let t = triangle();
        assert_eq!(blocking_sets_of_size(&t, 2).unwrap(), t);
        assert!(blocking_sets_of_size(&t, 1).unwrap().is_empty());
        let all = blocking_sets_of_size(&t, 3).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all.blocks()[0], t.point_set());
        assert!(blocking_sets_of_size(&t, 4).is_err());
    }

    #[test]
    fn empty_family_is_rejected() {
        assert_eq!(tau(&SetFamily::empty()), Err(Error::EmptyFamily));
        assert!(transversals(&SetFamily::empty()).is_err());
    }

    #[test]
    fn upper_bound_verdicts() {
        let t = triangle();
        let v = check_upper_bound(&t).unwrap();
        assert!(v.holds);
        assert_eq!(v.detail, "3 ≤ 4: pass");
        let mixed = SetFamily::new(vec!["a", "b"], vec![vec![0], vec![0, 1]]).unwrap();
        assert_eq!(check_upper_bound(&mixed), Err(Error::NotUniform));
        // two disjoint singletons are 1-uniform with 2 > 1^1 blocks
        let two = SetFamily::new(vec!["a", "b"], vec![vec![0], vec![1]]).unwrap();
        assert!(!check_upper_bound(&two).unwrap().holds);
    }

    #[test]
    fn non_intersecting_family() {
        // a perfect matching on 6 points needs one point per edge
        let m = SetFamily::new(
            vec!["a", "b", "c", "d", "e", "f"],
            vec![vec![0, 1], vec![2, 3], vec![4, 5]],
        )
        .unwrap();
        let r = transversals(&m).unwrap();
        assert_eq!(r.tau, 3);
        assert_eq!(r.transversals.len(), 8);
    }

    fn family_strategy() -> impl Strategy<Value = (usize, Vec<Block>)> {
        (1usize..=10).prop_flat_map(|n| {
            let block = (1u128..(1u128 << n)).prop_map(Block::from_bits);
            (Just(n), prop::collection::vec(block, 1..=12))
        })
    }

    proptest! {
        #[test]
        fn engine_agrees_with_powerset((n, blocks) in family_strategy()) {
            let (tau, sets) = minimum_blocking_sets(&blocks);
            let (otau, osets) = powerset_oracle(&blocks, n);
            prop_assert_eq!(tau, otau);
            prop_assert_eq!(&sets, &osets);
            prop_assert_eq!(blocking_sets(&blocks, n, tau), osets);
        }

        #[test]
        fn transversals_are_minimal((_n, blocks) in family_strategy()) {
            let (_, sets) = minimum_blocking_sets(&blocks);
            for t in sets {
                prop_assert!(blocks_all(t, &blocks));
                for p in t.iter() {
                    prop_assert!(!blocks_all(t.without(p), &blocks));
                }
            }
        }
    }
}
