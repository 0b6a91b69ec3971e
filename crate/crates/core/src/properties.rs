//! Verdicts for intersecting / uniform / MIF / CIF, each with a checkable
//! witness when the property fails.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::block::Block;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::transversal::{self, blocking_sets, blocks_all, minimum_blocking_sets};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Intersecting,
    Uniform,
    Mif,
    Cif,
    UpperBound,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Intersecting => "intersecting",
            Property::Uniform => "uniform",
            Property::Mif => "mif",
            Property::Cif => "cif",
            Property::UpperBound => "upper-bound",
        })
    }
}

/// Evidence for a failed property, over the checked family's universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    Set(Block),
    Pair(Block, Block),
    Count(usize),
}

impl Witness {
    pub fn to_json(&self, family: &SetFamily) -> Value {
        match *self {
            Witness::Set(b) => json!(family.block_labels(b)),
            Witness::Pair(a, b) => json!([family.block_labels(a), family.block_labels(b)]),
            Witness::Count(n) => json!(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub detail: String,
}

impl PropertyVerdict {
    fn pass(property: Property, detail: impl Into<String>) -> Self {
        PropertyVerdict {
            property,
            holds: true,
            witness: None,
            detail: detail.into(),
        }
    }

    fn fail(property: Property, witness: Witness, detail: impl Into<String>) -> Self {
        PropertyVerdict {
            property,
            holds: false,
            witness: Some(witness),
            detail: detail.into(),
        }
    }

    pub fn to_json(&self, family: &SetFamily) -> Value {
        json!({
            "property": self.property,
            "holds": self.holds,
            "witness": self.witness.map(|w| w.to_json(family)),
            "detail": self.detail,
        })
    }
}

pub fn is_intersecting(family: &SetFamily) -> PropertyVerdict {
    match disjoint_pair(family.blocks()) {
        Some((a, b)) => PropertyVerdict::fail(
            Property::Intersecting,
            Witness::Pair(a, b),
            "two blocks are disjoint",
        ),
        None => PropertyVerdict::pass(Property::Intersecting, "every two blocks meet"),
    }
}

pub fn is_uniform(family: &SetFamily) -> PropertyVerdict {
    let blocks = family.blocks();
    match blocks.first() {
        None => PropertyVerdict::pass(Property::Uniform, "empty family"),
        Some(&first) => match blocks.iter().find(|b| b.len() != first.len()) {
            Some(&other) => PropertyVerdict::fail(
                Property::Uniform,
                Witness::Pair(first, other),
                format!("blocks of sizes {} and {}", first.len(), other.len()),
            ),
            None => PropertyVerdict::pass(Property::Uniform, format!("k = {}", first.len())),
        },
    }
}

pub(crate) fn disjoint_pair(blocks: &[Block]) -> Option<(Block, Block)> {
    for (i, &a) in blocks.iter().enumerate() {
        if let Some(&b) = blocks[i + 1..].iter().find(|b| b.is_disjoint(a)) {
            return Some((a, b));
        }
    }
    None
}

/// `F` is a MIF iff `τ(F) = uk(F)` and `F^⊤ = F`.
pub fn is_mif(family: &SetFamily) -> Result<PropertyVerdict> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let k = family.uniform_k().ok_or(Error::NotUniform)?;
    let (tau, dual) = minimum_blocking_sets(family.blocks());
    if tau < k {
        return Ok(PropertyVerdict::fail(
            Property::Mif,
            Witness::Set(dual[0]),
            format!("tau = {tau} < k = {k}: blocks are not minimum blocking sets"),
        ));
    }
    if tau > k {
        let (a, b) = disjoint_pair(family.blocks()).expect("tau > k implies two disjoint blocks");
        return Ok(PropertyVerdict::fail(
            Property::Mif,
            Witness::Pair(a, b),
            format!("tau = {tau} > k = {k}: family is not intersecting"),
        ));
    }
    if let Some(&t) = dual.iter().find(|&&t| !family.contains(t)) {
        return Ok(PropertyVerdict::fail(
            Property::Mif,
            Witness::Set(t),
            "a transversal is not a block",
        ));
    }
    if dual.len() != family.len() {
        let b = family
            .blocks()
            .iter()
            .copied()
            .find(|b| dual.binary_search(b).is_err())
            .expect("some block is not a transversal");
        let other = family.blocks().iter().copied().find(|o| o.is_disjoint(b));
        return Ok(PropertyVerdict::fail(
            Property::Mif,
            other.map_or(Witness::Set(b), |o| Witness::Pair(b, o)),
            "a block is not a blocking set",
        ));
    }
    Ok(PropertyVerdict::pass(
        Property::Mif,
        format!("MIF({k}) with {} blocks", family.len()),
    ))
}

/// Outcome of one of the three equivalent closure tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Characterization {
    pub holds: bool,
    pub witness: Option<Block>,
}

impl Characterization {
    fn from_witness(witness: Option<Block>) -> Self {
        Characterization {
            holds: witness.is_none(),
            witness,
        }
    }
}

/// All three closure characterizations of a uniform intersecting family
/// with `τ ≤ k − 1`, evaluated independently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub k: usize,
    pub tau: usize,
    /// Number of transversals of the family.
    pub dual_len: usize,
    /// Blocking sets of `F ⊔ F^⊤` with at most `k` points are blocks of `F`.
    pub blocking_union: Characterization,
    /// Blocking sets of `F` with at most `k` points that are not blocks of
    /// `F` miss some transversal.
    pub blocking_family: Characterization,
    /// `F = (F ⊔ F^⊤)^⊤`, computed with the transversal engine.
    pub dual_of_union: Characterization,
}

impl ClosureReport {
    pub fn agree(&self) -> bool {
        self.blocking_union.holds == self.blocking_family.holds
            && self.blocking_family.holds == self.dual_of_union.holds
    }
}

/// Evaluates the three closure characterizations.
///
/// Sets are drawn from the point set only: a `k`-set using outside points
/// blocks exactly what its restriction blocks, so the sweeps check every
/// size up to `k`. Since supersets of blocking sets still block, the sizes
/// `k − 1` and `k` cover everything below.
pub fn closure_characterizations(family: &SetFamily) -> Result<ClosureReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let k = family.uniform_k().ok_or(Error::NotUniform)?;
    if let Some((a, b)) = disjoint_pair(family.blocks()) {
        return Err(Error::NotIntersecting(
            family.block_labels(a),
            family.block_labels(b),
        ));
    }
    let (tau, dual) = minimum_blocking_sets(family.blocks());
    if tau + 1 > k {
        return Err(Error::TauTooLarge { tau, k });
    }
    let n = family.num_points();
    let blocks = family.blocks();
    let mut union: Vec<Block> = blocks.to_vec();
    union.extend_from_slice(&dual);

    let small = k - 1;
    let blocking_union = Characterization::from_witness(
        blocking_sets(&union, n, small)
            .into_iter()
            .next()
            .or_else(|| {
                blocking_sets(&union, n, k)
                    .into_iter()
                    .find(|&c| !family.contains(c))
            }),
    );

    let blocking_family = Characterization::from_witness(
        blocking_sets(blocks, n, small)
            .into_iter()
            .find(|&c| blocks_all(c, &dual))
            .or_else(|| {
                blocking_sets(blocks, n, k)
                    .into_iter()
                    .find(|&c| !family.contains(c) && blocks_all(c, &dual))
            }),
    );

    let (_, closure) = minimum_blocking_sets(&union);
    let dual_of_union = Characterization::from_witness(if closure.as_slice() == blocks {
        None
    } else {
        closure
            .iter()
            .copied()
            .find(|&c| !family.contains(c))
            .or_else(|| blocks.iter().copied().find(|b| closure.binary_search(b).is_err()))
    });

    Ok(ClosureReport {
        k,
        tau,
        dual_len: dual.len(),
        blocking_union,
        blocking_family,
        dual_of_union,
    })
}

/// CIF verdict. All three characterizations run; disagreement is an error.
pub fn is_cif(family: &SetFamily) -> Result<PropertyVerdict> {
    let report = closure_characterizations(family)?;
    if !report.agree() {
        return Err(Error::CharacterizationMismatch {
            a: report.blocking_union.holds,
            b: report.blocking_family.holds,
            c: report.dual_of_union.holds,
        });
    }
    let (k, t) = (report.k, report.tau);
    if report.blocking_union.holds {
        Ok(PropertyVerdict::pass(
            Property::Cif,
            format!(
                "CIF({k},{t}) with {} blocks and {} transversals",
                family.len(),
                report.dual_len
            ),
        ))
    } else {
        let w = report
            .blocking_union
            .witness
            .expect("failed characterization has a witness");
        Ok(PropertyVerdict::fail(
            Property::Cif,
            Witness::Set(w),
            format!(
                "a blocking set of size {} of F and its transversals is not a block",
                w.len()
            ),
        ))
    }
}

/// `τ(F^⊤)`.
pub fn tau_of_dual(family: &SetFamily) -> Result<usize> {
    let report = transversal::transversals(family)?;
    transversal::tau(&report.transversals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(labels: &[&str], blocks: &[&[usize]]) -> SetFamily {
        SetFamily::new(labels.to_vec(), blocks.to_vec()).unwrap()
    }

    fn triangle() -> SetFamily {
        fam(&["a", "b", "c"], &[&[0, 1], &[1, 2], &[0, 2]])
    }

    fn k_subsets(n: usize, k: usize) -> SetFamily {
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let blocks: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        SetFamily::new(labels, blocks).unwrap()
    }

    #[test]
    fn intersecting_verdicts() {
        assert!(is_intersecting(&triangle()).holds);
        let two = fam(&["a", "b", "c", "d"], &[&[0, 1], &[2, 3]]);
        let v = is_intersecting(&two);
        assert!(!v.holds);
        let Some(Witness::Pair(x, y)) = v.witness else {
            panic!("expected a pair")
        };
        assert_eq!(two.block_labels(x), vec!["a", "b"]);
        assert_eq!(two.block_labels(y), vec!["c", "d"]);
    }

    #[test]
    fn uniform_verdicts() {
        assert!(is_uniform(&triangle()).holds);
        let mixed = fam(&["a", "b"], &[&[0], &[0, 1]]);
        assert!(!is_uniform(&mixed).holds);
    }

    #[test]
    fn small_mifs() {
        assert!(is_mif(&triangle()).unwrap().holds);
        assert!(is_mif(&fam(&["a"], &[&[0]])).unwrap().holds);
        // the Fano plane is the smallest MIF(3)
        let fano = fam(
            &["1", "2", "3", "4", "5", "6", "7"],
            &[&[0, 1, 2], &[0, 3, 4], &[0, 5, 6], &[1, 3, 5], &[1, 4, 6], &[2, 3, 6], &[2, 4, 5]],
        );
        assert!(is_mif(&fano).unwrap().holds);
    }

    #[test]
    fn mif_failure_witnesses() {
        // a single edge: tau = 1 < 2, witness is a transversal
        let edge = fam(&["a", "b"], &[&[0, 1]]);
        let v = is_mif(&edge).unwrap();
        assert!(!v.holds);
        assert!(matches!(v.witness, Some(Witness::Set(w)) if w.len() == 1));
        // path a-b-c: tau = 1 ({b}); not a MIF
        let path = fam(&["a", "b", "c"], &[&[0, 1], &[1, 2]]);
        assert!(!is_mif(&path).unwrap().holds);
        // two disjoint edges: tau = 2 = k but blocks do not block
        let two = fam(&["a", "b", "c", "d"], &[&[0, 1], &[2, 3]]);
        let v = is_mif(&two).unwrap();
        assert!(!v.holds);
        assert!(v.witness.is_some());
        assert_eq!(is_mif(&fam(&["a", "b"], &[&[0], &[0, 1]])), Err(Error::NotUniform));
    }

    #[test]
    fn complete_family_is_closed() {
        // all 4-subsets of a 5-set
        let f = k_subsets(5, 4);
        let v = is_cif(&f).unwrap();
        assert!(v.holds, "{}", v.detail);
        assert_eq!(v.detail, "CIF(4,2) with 5 blocks and 10 transversals");
    }

    #[test]
    fn cif_errors() {
        assert_eq!(
            is_cif(&fam(&["a", "b"], &[&[0], &[0, 1]])),
            Err(Error::NotUniform)
        );
        assert!(matches!(
            is_cif(&fam(&["a", "b", "c", "d"], &[&[0, 1], &[2, 3]])),
            Err(Error::NotIntersecting(_, _))
        ));
        // a MIF has tau = k
        assert_eq!(is_cif(&triangle()), Err(Error::TauTooLarge { tau: 2, k: 2 }));
    }

    #[test]
    fn open_family_fails_all_three() {
        // a star of three edges at `a`: tau = 1 and {a} alone blocks F ⊔ F^⊤
        let star = fam(&["a", "b", "c", "d"], &[&[0, 1], &[0, 2], &[0, 3]]);
        let r = closure_characterizations(&star).unwrap();
        assert!(r.agree());
        assert!(!r.blocking_union.holds);
        let w = r.blocking_union.witness.unwrap();
        assert!(blocks_all(w, star.blocks()));
        let v = is_cif(&star).unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn dual_tau_examples() {
        // all 3-subsets of a 4-set: dual is all 2-subsets, which need 3 points
        assert_eq!(tau_of_dual(&k_subsets(4, 3)).unwrap(), 3);
        assert_eq!(tau_of_dual(&triangle()).unwrap(), 2);
    }

    #[test]
    fn verdict_json_uses_labels() {
        let two = fam(&["a", "b", "c", "d"], &[&[0, 1], &[2, 3]]);
        let j = is_intersecting(&two).to_json(&two);
        assert_eq!(j["property"], "intersecting");
        assert_eq!(j["holds"], false);
        assert_eq!(j["witness"], json!([["a", "b"], ["c", "d"]]));
    }
}
