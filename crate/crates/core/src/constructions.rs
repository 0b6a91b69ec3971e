//! Generators for the concrete families: the cycle families `F(k,t)` and
//! `G(k,t)`, the complete and pointed closed families, the two smallest
//! maximal families, and coordinate affine planes.

use crate::block::{Block, PointId};
use crate::error::{Error, Result};
use crate::family::{Label, SetFamily};

/// The `t` disjoint parts `X_0, …, X_{t−1}` underlying the cycle families.
///
/// Parts `0..=⌊(t−1)/2⌋` have `k − ⌊t/2⌋` points, the rest `k − ⌊(t−1)/2⌋`.
/// Point `x^n_p` is labeled `X{n}:{p}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclePartition {
    k: usize,
    t: usize,
    sizes: Vec<usize>,
    offsets: Vec<usize>,
}

impl CyclePartition {
    pub fn new(k: usize, t: usize) -> Result<Self> {
        if t < 1 || t > k {
            return Err(Error::InvalidParams(format!(
                "cycle families need 1 <= t <= k, got k = {k}, t = {t}"
            )));
        }
        let small = k - t / 2;
        let large = k - (t - 1) / 2;
        let sizes: Vec<usize> = (0..t)
            .map(|n| if n <= (t - 1) / 2 { small } else { large })
            .collect();
        let total: usize = sizes.iter().sum();
        if total > crate::MAX_POINTS {
            return Err(Error::UniverseTooLarge(total));
        }
        let offsets = sizes
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect();
        Ok(CyclePartition {
            k,
            t,
            sizes,
            offsets,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn part_size(&self, n: usize) -> usize {
        self.sizes[n % self.t]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_points(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Point `x^n_p`, superscript taken modulo `t`.
    pub fn point(&self, n: usize, p: usize) -> PointId {
        let n = n % self.t;
        debug_assert!(p < self.sizes[n]);
        PointId(self.offsets[n] + p)
    }

    pub fn part(&self, n: usize) -> Block {
        let n = n % self.t;
        (0..self.sizes[n]).map(|p| self.point(n, p)).collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.t)
            .flat_map(|n| (0..self.sizes[n]).map(move |p| (n, p)))
            .map(|(n, p)| Label::new(format!("X{n}:{p}")).expect("nonempty"))
            .collect()
    }

    /// Number of extra parts a block based at `X_n` draws from.
    fn extras(&self, n: usize) -> usize {
        self.k - self.sizes[n]
    }
}

/// `F(k,t)`: `X_n` plus `x^{n+i}_{p_i}` for `1 ≤ i ≤ k − |X_n|`, where
/// `p_0 = 0` and each `p_i` is `p_{i−1}` or `p_{i−1} + 1`.
///
/// Subscripts are not wrapped; parameters that would push a subscript past
/// the end of its part are rejected.
pub fn circular_f(k: usize, t: usize) -> Result<SetFamily> {
    let parts = CyclePartition::new(k, t)?;
    let mut blocks = Vec::new();
    for n in 0..t {
        let m = parts.extras(n);
        for steps in 0u64..(1u64 << m) {
            let mut block = parts.part(n);
            let mut p = 0;
            for i in 1..=m {
                p += ((steps >> (i - 1)) & 1) as usize;
                if p >= parts.part_size(n + i) {
                    return Err(Error::InvalidParams(format!(
                        "F({k},{t}): subscript {p} exceeds part X{}",
                        (n + i) % t
                    )));
                }
                block = block.with(parts.point(n + i, p));
            }
            blocks.push(block);
        }
    }
    SetFamily::from_blocks(parts.labels(), blocks)
}

/// `G(k,t)`: `X_n` plus one arbitrary point from each of the next
/// `k − |X_n|` parts (superscripts modulo `t`).
pub fn circular_g(k: usize, t: usize) -> Result<SetFamily> {
    let parts = CyclePartition::new(k, t)?;
    let mut blocks = Vec::new();
    for n in 0..t {
        let m = parts.extras(n);
        let mut choice = vec![0usize; m];
        loop {
            let mut block = parts.part(n);
            for (i, &p) in choice.iter().enumerate() {
                block = block.with(parts.point(n + i + 1, p));
            }
            blocks.push(block);
            // odometer over the chosen subscripts
            let mut i = 0;
            while i < m {
                choice[i] += 1;
                if choice[i] < parts.part_size(n + i + 1) {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    SetFamily::from_blocks(parts.labels(), blocks)
}

/// All `k`-subsets of a `(k+t−1)`-set, labeled `C:{i}`.
pub fn complete_cif(k: usize, t: usize) -> Result<SetFamily> {
    if t < 1 || t + 1 > k {
        return Err(Error::InvalidParams(format!(
            "complete family needs 1 <= t <= k - 1, got k = {k}, t = {t}"
        )));
    }
    let n = k + t - 1;
    if n > crate::MAX_POINTS {
        return Err(Error::UniverseTooLarge(n));
    }
    let labels = (0..n).map(|i| Label::new(format!("C:{i}")).expect("nonempty")).collect();
    SetFamily::from_blocks(labels, subsets(n, k))
}

/// All `k`-subsets of a `(k+t−2)`-set `P`, plus `{x_C} ∪ (P ∖ C)` for every
/// `(t−1)`-subset `C` of `P` with a fresh point `x_C`.
///
/// Points of `P` are labeled `P:{i}`; `x_C` is labeled `x:` followed by the
/// members of `C` joined with `-`.
pub fn pointed_cif(k: usize, t: usize) -> Result<SetFamily> {
    if t < 2 || t + 1 > k {
        return Err(Error::InvalidParams(format!(
            "pointed family needs 2 <= t <= k - 1, got k = {k}, t = {t}"
        )));
    }
    let n = k + t - 2;
    let cs = subsets(n, t - 1);
    if n + cs.len() > crate::MAX_POINTS {
        return Err(Error::UniverseTooLarge(n + cs.len()));
    }
    let mut labels: Vec<Label> = (0..n)
        .map(|i| Label::new(format!("P:{i}")).expect("nonempty"))
        .collect();
    let mut blocks = subsets(n, k);
    let core = Block::full(n);
    for (j, c) in cs.into_iter().enumerate() {
        let name: Vec<String> = c.indices().map(|i| i.to_string()).collect();
        labels.push(Label::new(format!("x:{}", name.join("-"))).expect("nonempty"));
        blocks.push(core.difference(c).with(PointId(n + j)));
    }
    SetFamily::from_blocks(labels, blocks)
}

/// The unique MIF(1): `{{a}}`.
pub fn mif_singleton() -> SetFamily {
    SetFamily::new(vec!["a"], vec![vec![0]]).expect("valid family")
}

/// The unique MIF(2): `{{a,b},{b,c},{a,c}}`.
pub fn mif_triangle() -> SetFamily {
    SetFamily::new(vec!["a", "b", "c"], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
        .expect("valid family")
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<Block> {
    fn go(start: usize, n: usize, left: usize, cur: Block, out: &mut Vec<Block>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for p in start..=n - left {
            go(p + 1, n, left - 1, cur.with(PointId(p)), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, Block::EMPTY, &mut out);
    }
    out
}

/// The affine plane `AG(2, n)` for prime `n`, built on `Z_n × Z_n`.
///
/// Class `m < n` holds the lines `y = m·x + c`; class `n` holds the
/// vertical lines `x = c`. Point `(x, y)` is labeled `AG:{x},{y}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffinePlane {
    order: usize,
    classes: Vec<Vec<Block>>,
}

pub fn affine_plane(n: usize) -> Result<AffinePlane> {
    if n < 2 || (2..n).take_while(|d| d * d <= n).any(|d| n % d == 0) {
        return Err(Error::UnsupportedOrder(n));
    }
    if n * n > crate::MAX_POINTS {
        return Err(Error::UniverseTooLarge(n * n));
    }
    let pt = |x: usize, y: usize| PointId(x * n + y);
    let mut classes: Vec<Vec<Block>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|c| (0..n).map(|x| pt(x, (m * x + c) % n)).collect())
                .collect()
        })
        .collect();
    classes.push((0..n).map(|c| (0..n).map(|y| pt(c, y)).collect()).collect());
    Ok(AffinePlane { order: n, classes })
}

impl AffinePlane {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn num_points(&self) -> usize {
        self.order * self.order
    }

    pub fn labels(&self) -> Vec<Label> {
        let n = self.order;
        (0..n * n)
            .map(|i| Label::new(format!("AG:{},{}", i / n, i % n)).expect("nonempty"))
            .collect()
    }

    /// Parallel classes, each a list of `n` lines.
    pub fn classes(&self) -> &[Vec<Block>] {
        &self.classes
    }

    pub fn lines(&self) -> impl Iterator<Item = Block> + '_ {
        self.classes.iter().flatten().copied()
    }

    /// One parallel class as a family on its own.
    pub fn class_family(&self, i: usize) -> SetFamily {
        SetFamily::from_blocks(self.labels(), self.classes[i].iter().copied())
            .expect("valid plane")
    }

    /// All lines as one family.
    pub fn to_family(&self) -> SetFamily {
        SetFamily::from_blocks(self.labels(), self.lines()).expect("valid plane")
    }
}
