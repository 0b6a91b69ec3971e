//! Fixed-width point sets.
//!
//! A [`Block`] is a bit mask over a universe of at most [`MAX_POINTS`]
//! points. Ordering is lexicographic on the sorted member lists, which is
//! the canonical block order used everywhere in the crate.

use std::cmp::Ordering;
use std::fmt;

/// Largest universe a family may have.
pub const MAX_POINTS: usize = 128;

/// Position of a point in a family's label table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Block(u128);

impl Block {
    pub const EMPTY: Block = Block(0);

    pub const fn from_bits(bits: u128) -> Self {
        Block(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// The first `n` points.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            Block(!0)
        } else {
            Block((1u128 << n) - 1)
        }
    }

    pub fn singleton(p: PointId) -> Self {
        Block(1u128 << p.0)
    }

    /// Panics if an index is `>= MAX_POINTS`.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Block::EMPTY, |b, i| {
            assert!(i < MAX_POINTS, "point index {i} out of range");
            Block(b.0 | (1u128 << i))
        })
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, p: PointId) -> bool {
        p.0 < MAX_POINTS && (self.0 >> p.0) & 1 == 1
    }

    pub fn with(self, p: PointId) -> Self {
        Block(self.0 | (1u128 << p.0))
    }

    pub fn without(self, p: PointId) -> Self {
        Block(self.0 & !(1u128 << p.0))
    }

    pub fn union(self, other: Block) -> Self {
        Block(self.0 | other.0)
    }

    pub fn intersection(self, other: Block) -> Self {
        Block(self.0 & other.0)
    }

    pub fn difference(self, other: Block) -> Self {
        Block(self.0 & !other.0)
    }

    pub fn meets(self, other: Block) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_disjoint(self, other: Block) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Block) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<PointId> {
        (self.0 != 0).then(|| PointId(self.0.trailing_zeros() as usize))
    }

    pub fn last(self) -> Option<PointId> {
        (self.0 != 0).then(|| PointId(127 - self.0.leading_zeros() as usize))
    }

    pub fn iter(self) -> Points {
        Points(self.0)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        self.iter().map(PointId::index)
    }

    /// Rewrites every member `p` as `map[p]`.
    pub fn remap(self, map: &[usize]) -> Block {
        Block::from_indices(self.indices().map(|i| map[i]))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        // Both member lists agree below the lowest differing point p. The
        // list holding p is smaller unless the other list stops right there.
        let p = (self.0 ^ other.0).trailing_zeros();
        let above = if p == 127 { 0 } else { !0u128 << (p + 1) };
        if (self.0 >> p) & 1 == 1 {
            if other.0 & above != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        } else if self.0 & above != 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl FromIterator<PointId> for Block {
    fn from_iter<I: IntoIterator<Item = PointId>>(iter: I) -> Self {
        Block::from_indices(iter.into_iter().map(PointId::index))
    }
}

impl IntoIterator for Block {
    type Item = PointId;
    type IntoIter = Points;

    fn into_iter(self) -> Points {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`Block`].
#[derive(Clone, Debug)]
pub struct Points(u128);

impl Iterator for Points {
    type Item = PointId;

    fn next(&mut self) -> Option<PointId> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(PointId(p))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points {}
