//! Naive reference implementations, written against plain `u64` masks so
//! they share no code with the engine.
#![allow(dead_code)]

use mifkit::SetFamily;

pub fn masks(f: &SetFamily) -> Vec<u64> {
    f.blocks()
        .iter()
        .map(|b| b.indices().fold(0u64, |m, i| m | 1 << i))
        .collect()
}

fn hits_all(set: u64, blocks: &[u64]) -> bool {
    blocks.iter().all(|&b| b & set != 0)
}

/// `τ` and all minimum blocking sets, by walking the full powerset.
pub fn powerset_transversals(n: usize, blocks: &[u64]) -> (usize, Vec<u64>) {
    let mut best = usize::MAX;
    let mut sets = Vec::new();
    for s in 0u64..(1 << n) {
        if !hits_all(s, blocks) {
            continue;
        }
        let c = s.count_ones() as usize;
        if c < best {
            best = c;
            sets.clear();
        }
        if c == best {
            sets.push(s);
        }
    }
    sets.sort_unstable();
    (best, sets)
}

/// Every `k`-subset of `0..n`, as masks.
pub fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | 1 << i));
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A uniform intersecting family equals its own transversal family: every
/// `k`-set that blocks it is a block, and nothing smaller blocks it.
pub fn naive_is_mif(n: usize, blocks: &[u64], k: usize) -> bool {
    let mut sorted = blocks.to_vec();
    sorted.sort_unstable();
    for size in 1..k {
        if k_subsets(n, size).into_iter().any(|s| hits_all(s, blocks)) {
            return false;
        }
    }
    let mut blocking: Vec<u64> = k_subsets(n, k).into_iter().filter(|&s| hits_all(s, blocks)).collect();
    blocking.sort_unstable();
    blocking == sorted
}

/// `F = (F ∪ F^⊤)^⊤` checked from the definition over the point set of `F`.
pub fn naive_is_closed(n: usize, blocks: &[u64], k: usize) -> bool {
    let (tau, dual) = (1..=k)
        .find_map(|s| {
            let b: Vec<u64> = k_subsets(n, s).into_iter().filter(|&x| hits_all(x, blocks)).collect();
            (!b.is_empty()).then_some((s, b))
        })
        .expect("a block is blocking");
    if tau >= k || !is_pairwise_intersecting(blocks) {
        return false;
    }
    let mut both = blocks.to_vec();
    both.extend(&dual);
    for size in 1..k {
        if k_subsets(n, size).into_iter().any(|s| hits_all(s, &both)) {
            return false;
        }
    }
    let mut lhs: Vec<u64> = k_subsets(n, k).into_iter().filter(|&s| hits_all(s, &both)).collect();
    let mut rhs = blocks.to_vec();
    lhs.sort_unstable();
    rhs.sort_unstable();
    lhs == rhs
}

pub fn is_pairwise_intersecting(blocks: &[u64]) -> bool {
    blocks
        .iter()
        .enumerate()
        .all(|(i, &a)| blocks[i + 1..].iter().all(|&b| a & b != 0))
}
