use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{check, fresh, require_cif, require_mif, Check, Claim, ClaimKind, CompositionReport};
use crate::block::Block;
use crate::constructions::AffinePlane;
use crate::error::{Error, Result};
use crate::family::SetFamily;

/// Default cap on `classes^|F^⊤|` for [`search_partitions`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// A split of a transversal family into numbered classes.
///
/// `assignment[i]` is the class of the `i`-th block of the canonical
/// transversal family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalPartition {
    pub classes: usize,
    pub assignment: Vec<usize>,
}

impl TransversalPartition {
    pub fn trivial(len: usize) -> Self {
        TransversalPartition {
            classes: 1,
            assignment: vec![0; len],
        }
    }

    /// Builds a partition from classes given as label lists.
    pub fn from_labels(dual: &SetFamily, classes: &[Vec<Vec<String>>]) -> Result<Self> {
        let mut assignment = vec![usize::MAX; dual.len()];
        for (c, class) in classes.iter().enumerate() {
            for set in class {
                let block = set
                    .iter()
                    .map(|l| dual.point(l).ok_or_else(|| Error::UnknownPoint(l.clone())))
                    .collect::<Result<Block>>()?;
                let i = dual
                    .blocks()
                    .binary_search(&block)
                    .map_err(|_| Error::BadPartition(format!("{set:?} is not a transversal")))?;
                if assignment[i] != usize::MAX {
                    return Err(Error::BadPartition(format!("{set:?} appears twice")));
                }
                assignment[i] = c;
            }
        }
        if let Some(i) = assignment.iter().position(|&c| c == usize::MAX) {
            return Err(Error::BadPartition(format!(
                "transversal {:?} is in no class",
                dual.block_labels(dual.blocks()[i])
            )));
        }
        Ok(TransversalPartition {
            classes: classes.len(),
            assignment,
        })
    }

    fn validate(&self, dual: &SetFamily) -> Result<()> {
        if self.assignment.len() != dual.len() {
            return Err(Error::BadPartition(format!(
                "{} assignments for {} transversals",
                self.assignment.len(),
                dual.len()
            )));
        }
        let mut used = vec![false; self.classes];
        for &c in &self.assignment {
            *used
                .get_mut(c)
                .ok_or_else(|| Error::BadPartition(format!("class {c} out of range")))? = true;
        }
        if let Some(c) = used.iter().position(|u| !u) {
            return Err(Error::BadPartition(format!("class {c} is empty")));
        }
        Ok(())
    }

    pub fn class_blocks(&self, dual: &SetFamily) -> Vec<Vec<Block>> {
        let mut out = vec![Vec::new(); self.classes];
        for (&c, &b) in self.assignment.iter().zip(dual.blocks()) {
            out[c].push(b);
        }
        out
    }

    pub fn to_json(&self, dual: &SetFamily) -> Value {
        let classes: Vec<Vec<Vec<String>>> = self
            .class_blocks(dual)
            .into_iter()
            .map(|c| c.into_iter().map(|b| dual.block_labels(b)).collect())
            .collect();
        json!({ "classes": classes })
    }
}

/// `½·C(2t, t)`, the most classes a point-set partition can have.
pub fn max_pointset_classes(t: usize) -> usize {
    // C(2t, t) / 2 = C(2t - 1, t - 1)
    let (n, r) = (2 * t - 1, t - 1);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn labels_of(dual: &SetFamily, b: Block) -> Vec<String> {
    dual.block_labels(b)
}

fn class_family(dual: &SetFamily, blocks: &[Block]) -> Result<SetFamily> {
    SetFamily::from_blocks(dual.labels().to_vec(), blocks.iter().copied())
}

/// `F ⊔ (A_1 ⊛ C_1) ⊔ … ⊔ (A_n ⊛ C_n)`, where each transversal of a class
/// meets every transversal outside it.
///
/// `mifs[i]` is attached to class `i`; each is relabeled with `A{i}:` if
/// it shares points with what is already assembled.
pub fn embed_partitioned(
    cif: &SetFamily,
    partition: &TransversalPartition,
    mifs: &[SetFamily],
) -> Result<CompositionReport> {
    let mut checklist = Vec::new();
    let (k, t, dual) = require_cif(cif, "F", &mut checklist)?;
    let n = partition.classes;
    let max = max_pointset_classes(t);
    check(&mut checklist, format!("{n} classes <= {max}"), n <= max, || {
        Error::TooManyClasses { classes: n, max }
    })?;
    partition.validate(&dual)?;
    check(
        &mut checklist,
        format!("one MIF per class ({n})"),
        mifs.len() == n,
        || Error::BadPartition(format!("{} MIFs for {n} classes", mifs.len())),
    )?;
    for (i, a) in mifs.iter().enumerate() {
        let l = require_mif(a, &format!("A{i}"), &mut checklist)?;
        check(&mut checklist, format!("uk(A{i}) = {}", k - t), l == k - t, || {
            Error::SizeMismatch {
                expected: k - t,
                found: l,
            }
        })?;
    }
    let classes = partition.class_blocks(&dual);
    let violation = classes.iter().enumerate().find_map(|(i, class)| {
        class.iter().find_map(|&s| {
            dual.blocks()
                .iter()
                .zip(&partition.assignment)
                .find(|&(&o, &c)| c != i && s.is_disjoint(o))
                .map(|(&o, _)| (i, s, o))
        })
    });
    check(
        &mut checklist,
        "every class blocks the other transversals",
        violation.is_none(),
        || {
            let (class, s, o) = violation.unwrap();
            Error::ConditionCFailed {
                class,
                set: labels_of(&dual, s),
                missed: labels_of(&dual, o),
            }
        },
    )?;

    let mut result = cif.clone();
    for (i, (a, class)) in mifs.iter().zip(&classes).enumerate() {
        let a = fresh(a, &result, &format!("A{i}:"));
        result = result.union(&a.join(&class_family(&dual, class)?)?)?;
    }
    Ok(CompositionReport {
        result,
        checklist,
        claimed: Claim {
            kind: ClaimKind::Mif,
            k,
            tau: k,
        },
        claimed_dual: None,
        core_counts: Some((cif.len(), dual.len())),
    })
}

/// `F ⊔ (A_0 ⊛ C_0) ⊔ … ⊔ (A_n ⊛ C_n)` with `A_i` the parallel classes of
/// an affine plane of order `n`, for a CIF with `τ = k − n`.
pub fn embed_affine(
    cif: &SetFamily,
    partition: &TransversalPartition,
    plane: &AffinePlane,
) -> Result<CompositionReport> {
    let mut checklist = Vec::new();
    let (k, t, dual) = require_cif(cif, "F", &mut checklist)?;
    let order = plane.order();
    check(
        &mut checklist,
        format!("tau = k - {order}"),
        t + order == k,
        || Error::TauMismatch {
            tau: t,
            expected: k.saturating_sub(order),
        },
    )?;
    check(
        &mut checklist,
        format!("{} classes", order + 1),
        partition.classes == order + 1,
        || {
            Error::BadPartition(format!(
                "{} classes for a plane with {} parallel classes",
                partition.classes,
                order + 1
            ))
        },
    )?;
    partition.validate(&dual)?;
    let classes = partition.class_blocks(&dual);

    let disjoint_pair = classes.iter().enumerate().find_map(|(i, class)| {
        class.iter().enumerate().find_map(|(a, &x)| {
            class[a + 1..]
                .iter()
                .find(|&&y| x.is_disjoint(y))
                .map(|&y| (i, x, y))
        })
    });
    check(&mut checklist, "every class is intersecting", disjoint_pair.is_none(), || {
        let (class, x, y) = disjoint_pair.unwrap();
        Error::ConditionAFailed {
            class,
            first: labels_of(&dual, x),
            second: labels_of(&dual, y),
        }
    })?;
    let lonely = missing_partner(&classes);
    check(
        &mut checklist,
        "every transversal has a disjoint partner in each other class",
        lonely.is_none(),
        || {
            let (from, to, s) = lonely.unwrap();
            Error::ConditionBFailed {
                from,
                to,
                set: labels_of(&dual, s),
            }
        },
    )?;

    let mut result = cif.clone();
    for (i, class) in classes.iter().enumerate() {
        let a = fresh(&plane.class_family(i), &result, "AG:");
        result = result.union(&a.join(&class_family(&dual, class)?)?)?;
    }
    Ok(CompositionReport {
        result,
        checklist,
        claimed: Claim {
            kind: ClaimKind::Mif,
            k,
            tau: k,
        },
        claimed_dual: None,
        core_counts: Some((cif.len(), dual.len())),
    })
}

/// First `(from, to, set)` where `set` in class `from` meets every member
/// of class `to`.
fn missing_partner(classes: &[Vec<Block>]) -> Option<(usize, usize, Block)> {
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(&s) = ci.iter().find(|&&s| cj.iter().all(|&o| s.meets(o))) {
                return Some((i, j, s));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionMode {
    /// Classes for [`embed_partitioned`].
    Pointset,
    /// Classes for [`embed_affine`].
    Affine,
}

/// Every partition of `F^⊤` into exactly `classes` nonempty classes that
/// satisfies the conditions of `mode`, each listed once (classes numbered
/// by first member) in lexicographic order of assignments.
///
/// Fails with `BudgetExceeded` when `classes^|F^⊤|` exceeds `budget`.
pub fn search_partitions(
    cif: &SetFamily,
    classes: usize,
    mode: PartitionMode,
    budget: u64,
) -> Result<Vec<TransversalPartition>> {
    let (_, t, dual) = require_cif(cif, "F", &mut Vec::<Check>::new())?;
    if classes == 0 {
        return Err(Error::InvalidParams("at least one class is needed".into()));
    }
    if mode == PartitionMode::Pointset && classes > max_pointset_classes(t) {
        return Err(Error::TooManyClasses {
            classes,
            max: max_pointset_classes(t),
        });
    }
    let m = dual.len();
    let space = u32::try_from(m)
        .ok()
        .and_then(|e| (classes as u64).checked_pow(e));
    match space {
        Some(s) if s <= budget => {}
        _ => {
            return Err(Error::BudgetExceeded {
                needed: format!("{classes}^{m}"),
                budget,
            })
        }
    }
    let blocks = dual.blocks();
    // disjoint[j] lists earlier transversals disjoint from the j-th
    let disjoint: Vec<Vec<usize>> = (0..m)
        .map(|j| (0..j).filter(|&i| blocks[i].is_disjoint(blocks[j])).collect())
        .collect();
    let mut search = Search {
        classes,
        mode,
        blocks,
        disjoint: &disjoint,
        assignment: Vec::with_capacity(m),
        found: Vec::new(),
    };
    search.run(0);
    Ok(search.found)
}

struct Search<'a> {
    classes: usize,
    mode: PartitionMode,
    blocks: &'a [Block],
    disjoint: &'a [Vec<usize>],
    assignment: Vec<usize>,
    found: Vec<TransversalPartition>,
}

impl Search<'_> {
    fn run(&mut self, used: usize) {
        let j = self.assignment.len();
        let m = self.blocks.len();
        if j == m {
            if used == self.classes && self.complete() {
                self.found.push(TransversalPartition {
                    classes: self.classes,
                    assignment: self.assignment.clone(),
                });
            }
            return;
        }
        if self.classes - used > m - j {
            return;
        }
        let top = (used + 1).min(self.classes);
        for c in 0..top {
            let ok = self.disjoint[j].iter().all(|&i| match self.mode {
                PartitionMode::Pointset => self.assignment[i] == c,
                PartitionMode::Affine => self.assignment[i] != c,
            });
            if ok {
                self.assignment.push(c);
                self.run(used.max(c + 1));
                self.assignment.pop();
            }
        }
    }

    fn complete(&self) -> bool {
        match self.mode {
            PartitionMode::Pointset => true,
            PartitionMode::Affine => {
                let mut classes = vec![Vec::new(); self.classes];
                for (&c, &b) in self.assignment.iter().zip(self.blocks) {
                    classes[c].push(b);
                }
                missing_partner(&classes).is_none()
            }
        }
    }
}
