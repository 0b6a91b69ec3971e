//! The canonical set-family data model and its union / join algebra.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::block::{Block, PointId, MAX_POINTS};
use crate::error::{Error, Result};

/// Name of a point. Nonempty; unique within a universe.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Label(String);

impl Label {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Label(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn prefixed(&self, prefix: &str) -> Label {
        Label(format!("{prefix}{}", self.0))
    }
}

impl TryFrom<String> for Label {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Label::new(s)
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A finite family of finite sets in canonical form.
///
/// Invariants, established by every constructor:
/// - labels are strictly ascending, so equal label sets give equal tables;
/// - every label occurs in at least one block (the universe is the point set);
/// - blocks are nonempty, distinct and in ascending [`Block`] order.
///
/// Two families are equal exactly when they have the same points and the
/// same blocks, so `==` is set-family equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SetFamily {
    labels: Vec<Label>,
    blocks: Vec<Block>,
}

impl SetFamily {
    /// Strict constructor: duplicate blocks and unused points are errors.
    pub fn new<L, B>(labels: Vec<L>, blocks: Vec<B>) -> Result<Self>
    where
        L: Into<String>,
        B: AsRef<[usize]>,
    {
        let labels = labels
            .into_iter()
            .map(Label::new)
            .collect::<Result<Vec<_>>>()?;
        let n = labels.len();
        if n > MAX_POINTS {
            return Err(Error::UniverseTooLarge(n));
        }
        check_unique(&labels)?;
        let mut masks = Vec::with_capacity(blocks.len());
        for (i, members) in blocks.iter().enumerate() {
            let members = members.as_ref();
            if members.is_empty() {
                return Err(Error::EmptyBlock(i));
            }
            if let Some(&bad) = members.iter().find(|&&m| m >= n) {
                return Err(Error::IndexOutOfRange { index: bad, len: n });
            }
            masks.push(Block::from_indices(members.iter().copied()));
        }
        let mut seen = BTreeSet::new();
        for &m in &masks {
            if !seen.insert(m) {
                return Err(Error::DuplicateBlock(names(&labels, m)));
            }
        }
        let support = masks.iter().fold(Block::EMPTY, |a, &b| a.union(b));
        if let Some(p) = Block::full(n).difference(support).first() {
            return Err(Error::IsolatedPoint(labels[p.0].to_string()));
        }
        Ok(Self::canonical(labels, masks))
    }

    /// Lenient constructor for generated families: duplicate blocks are
    /// merged and labels that occur in no block are dropped.
    pub fn from_blocks<I>(labels: Vec<Label>, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = Block>,
    {
        if labels.len() > MAX_POINTS {
            return Err(Error::UniverseTooLarge(labels.len()));
        }
        check_unique(&labels)?;
        let universe = Block::full(labels.len());
        let mut masks = Vec::new();
        for (i, b) in blocks.into_iter().enumerate() {
            if b.is_empty() {
                return Err(Error::EmptyBlock(i));
            }
            if !b.is_subset(universe) {
                let index = b.difference(universe).first().unwrap().0;
                return Err(Error::IndexOutOfRange {
                    index,
                    len: labels.len(),
                });
            }
            masks.push(b);
        }
        let support = masks.iter().fold(Block::EMPTY, |a, &b| a.union(b));
        let mut remap = vec![usize::MAX; labels.len()];
        let mut kept = Vec::with_capacity(support.len());
        for (new, p) in support.iter().enumerate() {
            remap[p.0] = new;
            kept.push(labels[p.0].clone());
        }
        let masks = masks.into_iter().map(|b| b.remap(&remap)).collect();
        Ok(Self::canonical(kept, masks))
    }

    /// The family with no blocks (and therefore no points).
    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorts labels, rewrites blocks accordingly and sorts/dedups blocks.
    fn canonical(labels: Vec<Label>, masks: Vec<Block>) -> Self {
        let mut order: Vec<usize> = (0..labels.len()).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        let mut remap = vec![0; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let identity = order.iter().enumerate().all(|(i, &o)| i == o);
        let (labels, mut blocks) = if identity {
            (labels, masks)
        } else {
            (
                order.iter().map(|&o| labels[o].clone()).collect(),
                masks.into_iter().map(|b| b.remap(&remap)).collect::<Vec<_>>(),
            )
        };
        blocks.sort_unstable();
        blocks.dedup();
        SetFamily { labels, blocks }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn num_points(&self) -> usize {
        self.labels.len()
    }

    /// All points of the universe as one mask.
    pub fn point_set(&self) -> Block {
        Block::full(self.labels.len())
    }

    pub fn label(&self, p: PointId) -> &Label {
        &self.labels[p.0]
    }

    pub fn point(&self, label: &str) -> Option<PointId> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
            .map(PointId)
    }

    /// Common block size, or `None` when the family is empty or mixed.
    pub fn uniform_k(&self) -> Option<usize> {
        let k = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == k).then_some(k)
    }

    pub fn contains(&self, block: Block) -> bool {
        self.blocks.binary_search(&block).is_ok()
    }

    pub fn block_labels(&self, block: Block) -> Vec<String> {
        names(&self.labels, block)
    }

    /// Number of blocks through each point.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.labels.len()];
        for b in &self.blocks {
            for p in b.iter() {
                deg[p.0] += 1;
            }
        }
        deg
    }

    /// Translates `block`, given over `source`'s universe, into this
    /// family's universe. `None` if some member label is absent here.
    pub fn transport(&self, block: Block, source: &SetFamily) -> Option<Block> {
        block
            .iter()
            .map(|p| self.point(source.label(p).as_str()))
            .collect::<Option<Vec<_>>>()
            .map(|ps| ps.into_iter().collect())
    }

    /// Keeps the blocks accepted by `keep`, shrinking the universe.
    pub fn filter(&self, mut keep: impl FnMut(Block) -> bool) -> SetFamily {
        let blocks: Vec<Block> = self.blocks.iter().copied().filter(|&b| keep(b)).collect();
        SetFamily::from_blocks(self.labels.clone(), blocks).expect("subfamily of a valid family")
    }

    /// Every label gets `prefix` in front.
    pub fn prefixed(&self, prefix: &str) -> SetFamily {
        let labels = self.labels.iter().map(|l| l.prefixed(prefix)).collect();
        // a common prefix keeps the label order, so the blocks stay canonical
        SetFamily {
            labels,
            blocks: self.blocks.clone(),
        }
    }

    /// Renames points through `rename`, which must stay injective.
    pub fn relabeled(&self, mut rename: impl FnMut(&Label) -> Label) -> Result<SetFamily> {
        let labels = self.labels.iter().map(&mut rename).collect();
        SetFamily::from_blocks(labels, self.blocks.iter().copied())
    }

    pub fn shares_points_with(&self, other: &SetFamily) -> bool {
        !self.common_labels(other).is_empty()
    }

    pub fn common_labels(&self, other: &SetFamily) -> Vec<String> {
        let mine: BTreeSet<&Label> = self.labels.iter().collect();
        other
            .labels
            .iter()
            .filter(|l| mine.contains(l))
            .map(|l| l.to_string())
            .collect()
    }

    /// Union of two block-disjoint families, points identified by label.
    ///
    /// This is the `⊔` of families that already live on a common point
    /// set (e.g. a family and its transversals). A block present in both
    /// is an error.
    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        let (labels, left, right) = merge_universes(self, other)?;
        let mut blocks: Vec<Block> = self.blocks.iter().map(|b| b.remap(&left)).collect();
        let mine: BTreeSet<Block> = blocks.iter().copied().collect();
        for b in &other.blocks {
            let b = b.remap(&right);
            if mine.contains(&b) {
                return Err(Error::DuplicateBlock(names(&labels, b)));
            }
            blocks.push(b);
        }
        Ok(SetFamily::canonical(labels, blocks))
    }

    /// `F ⊔ G` on disjoint point sets. When the label sets overlap, the
    /// left family is relabeled with `L:` and the right with `R:`.
    pub fn disjoint_union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.shares_points_with(other) {
            self.prefixed("L:").union(&other.prefixed("R:"))
        } else {
            self.union(other)
        }
    }

    /// `F ⊛ G`: every union of a block of `self` with a block of `other`.
    pub fn join(&self, other: &SetFamily) -> Result<SetFamily> {
        let common = self.common_labels(other);
        if !common.is_empty() {
            return Err(Error::OverlappingUniverses(common));
        }
        let (labels, left, right) = merge_universes(self, other)?;
        let right_blocks: Vec<Block> = other.blocks.iter().map(|b| b.remap(&right)).collect();
        let mut blocks = Vec::with_capacity(self.len() * other.len());
        for a in &self.blocks {
            let a = a.remap(&left);
            blocks.extend(right_blocks.iter().map(|&b| a.union(b)));
        }
        Ok(SetFamily::canonical(labels, blocks))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.blocks.iter().map(|&b| self.block_labels(b)))
            .finish()
    }
}

fn check_unique(labels: &[Label]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::DuplicateLabel(l.to_string()));
        }
    }
    Ok(())
}

fn names(labels: &[Label], block: Block) -> Vec<String> {
    block.indices().map(|i| labels[i].to_string()).collect()
}

/// Sorted union of both label tables plus index maps into it.
fn merge_universes(a: &SetFamily, b: &SetFamily) -> Result<(Vec<Label>, Vec<usize>, Vec<usize>)> {
    let mut labels: Vec<Label> = a.labels.iter().chain(&b.labels).cloned().collect();
    labels.sort();
    labels.dedup();
    if labels.len() > MAX_POINTS {
        return Err(Error::UniverseTooLarge(labels.len()));
    }
    let index = |l: &Label| labels.binary_search(l).expect("label present");
    let left = a.labels.iter().map(index).collect();
    let right = b.labels.iter().map(index).collect();
    Ok((labels, left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SetFamily {
        SetFamily::new(vec!["a", "b", "c"], vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn triangle_is_canonical() {
        let t = triangle();
        assert_eq!(t.num_points(), 3);
        assert_eq!(t.len(), 3);
        assert_eq!(t.uniform_k(), Some(2));
        let lists: Vec<Vec<usize>> = t.blocks().iter().map(|b| b.indices().collect()).collect();
        assert_eq!(lists, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn singleton_family() {
        let s = SetFamily::new(vec!["a"], vec![vec![0]]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.uniform_k(), Some(1));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            SetFamily::new(vec!["a", "b"], vec![vec![0], vec![0]]),
            Err(Error::DuplicateBlock(_))
        ));
        assert!(matches!(
            SetFamily::new(vec!["a", "a"], vec![vec![0, 1]]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            SetFamily::new(vec!["a", "b"], vec![vec![0], vec![]]),
            Err(Error::EmptyBlock(1))
        ));
        assert!(matches!(
            SetFamily::new(vec!["a", "b"], vec![vec![0]]),
            Err(Error::IsolatedPoint(p)) if p == "b"
        ));
        assert!(matches!(
            SetFamily::new(vec!["a"], vec![vec![0, 3]]),
            Err(Error::IndexOutOfRange { index: 3, len: 1 })
        ));
        assert!(matches!(
            SetFamily::new(vec![""], vec![vec![0]]),
            Err(Error::EmptyLabel)
        ));
    }

    #[test]
    fn labels_are_sorted_on_construction() {
        let f = SetFamily::new(vec!["c", "a", "b"], vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(f.labels().iter().map(Label::as_str).collect::<Vec<_>>(), ["a", "b", "c"]);
        let g = SetFamily::new(vec!["a", "b", "c"], vec![vec![1], vec![2, 0]]).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn disjoint_union_counts_add() {
        let s = SetFamily::new(vec!["z"], vec![vec![0]]).unwrap();
        let u = triangle().disjoint_union(&s).unwrap();
        assert_eq!((u.num_points(), u.len()), (4, 4));
        // overlapping labels are prefixed rather than merged
        let twice = triangle().disjoint_union(&triangle()).unwrap();
        assert_eq!((twice.num_points(), twice.len()), (6, 6));
        assert!(twice.point("L:a").is_some() && twice.point("R:c").is_some());
    }

    #[test]
    fn join_with_a_point() {
        let alpha = SetFamily::new(vec!["alpha"], vec![vec![0]]).unwrap();
        let j = alpha.join(&triangle()).unwrap();
        assert_eq!(j.len(), 3);
        assert_eq!(j.uniform_k(), Some(3));
        let a = j.point("alpha").unwrap();
        assert!(j.blocks().iter().all(|b| b.contains(a)));
    }

    #[test]
    fn join_rejects_shared_points() {
        assert!(matches!(
            triangle().join(&triangle()),
            Err(Error::OverlappingUniverses(_))
        ));
    }

    #[test]
    fn union_merges_by_label_and_rejects_shared_blocks() {
        let edges = SetFamily::new(vec!["a", "b"], vec![vec![0, 1]]).unwrap();
        let pts = SetFamily::new(vec!["b", "c"], vec![vec![0], vec![1]]).unwrap();
        let u = edges.union(&pts).unwrap();
        assert_eq!((u.num_points(), u.len()), (3, 3));
        assert!(matches!(edges.union(&edges), Err(Error::DuplicateBlock(_))));
    }

    #[test]
    fn filter_shrinks_universe() {
        let t = triangle();
        let a = t.point("a").unwrap();
        let rest = t.filter(|b| !b.contains(a));
        assert_eq!(rest.num_points(), 2);
        assert_eq!(rest.len(), 1);
    }

    #[test]
    fn transport_between_universes() {
        let t = triangle();
        let sub = t.filter(|b| b.len() == 2 && !b.contains(PointId(0)));
        let b = sub.blocks()[0];
        let back = t.transport(b, &sub).unwrap();
        assert_eq!(t.block_labels(back), vec!["b", "c"]);
    }
}
