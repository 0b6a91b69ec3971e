//! Composition of closed and maximal intersecting families.
//!
//! Every composer validates its own preconditions and records them in a
//! [`CompositionReport`] checklist; a failed precondition is an error and
//! no family is produced. Checking the composed family itself is a
//! separate, explicit step ([`CompositionReport::verify`]) because it is
//! exponential in the size of the universe.

mod bounds;
mod partition;

use serde::Serialize;
use serde_json::{json, Value};

use crate::block::PointId;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::properties::{is_cif, is_mif, tau_of_dual};
use crate::transversal::{self, TransversalReport};

pub use bounds::{corollary_bound, lower_bound, BoundTable};
pub use partition::{
    embed_affine, embed_partitioned, max_pointset_classes, search_partitions, PartitionMode,
    TransversalPartition, DEFAULT_SEARCH_BUDGET,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Mif,
    Cif,
    /// Only block size, `τ` and the transversal family are claimed.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub kind: ClaimKind,
    pub k: usize,
    pub tau: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionReport {
    pub result: SetFamily,
    pub checklist: Vec<Check>,
    pub claimed: Claim,
    /// The transversal family the composition predicts, when there is one.
    pub claimed_dual: Option<SetFamily>,
    /// Blocks and transversals of the closed core (`b` and `b^⊤`).
    pub core_counts: Option<(usize, usize)>,
}

impl CompositionReport {
    /// Checks the claims against the engine: block size, `τ`, the predicted
    /// transversal family, and the MIF / CIF property.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let Claim { kind, k, tau } = self.claimed;
        let mut checks = vec![Check {
            name: format!("uk = {k}"),
            holds: self.result.uniform_k() == Some(k),
        }];
        let TransversalReport {
            tau: found,
            transversals,
        } = transversal::transversals(&self.result)?;
        checks.push(Check {
            name: format!("tau = {tau}"),
            holds: found == tau,
        });
        if let Some(dual) = &self.claimed_dual {
            checks.push(Check {
                name: format!("transversals = predicted family of {}", dual.len()),
                holds: &transversals == dual,
            });
        }
        match kind {
            ClaimKind::Mif => checks.push(Check {
                name: "is MIF".into(),
                holds: is_mif(&self.result)?.holds,
            }),
            ClaimKind::Cif => checks.push(Check {
                name: "is CIF".into(),
                holds: is_cif(&self.result).map(|v| v.holds).unwrap_or(false),
            }),
            ClaimKind::Uniform => {}
        }
        Ok(checks)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "blocks": self.result.len(),
            "points": self.result.num_points(),
            "checklist": self.checklist,
            "claimed": self.claimed,
            "claimed_dual": self.claimed_dual.as_ref().map(SetFamily::len),
            "core": self.core_counts.map(|(b, d)| json!({"blocks": b, "transversals": d})),
        })
    }
}

fn check(list: &mut Vec<Check>, name: impl Into<String>, holds: bool, err: impl FnOnce() -> Error) -> Result<()> {
    list.push(Check {
        name: name.into(),
        holds,
    });
    if holds {
        Ok(())
    } else {
        Err(err())
    }
}

/// Requires a CIF; returns `(k, t, transversals)`.
fn require_cif(family: &SetFamily, what: &str, list: &mut Vec<Check>) -> Result<(usize, usize, SetFamily)> {
    let verdict = is_cif(family);
    let name = format!("{what} is a CIF");
    match verdict {
        Ok(v) if v.holds => {
            list.push(Check { name, holds: true });
            let report = transversal::transversals(family)?;
            let k = family.uniform_k().expect("CIF is uniform");
            Ok((k, report.tau, report.transversals))
        }
        Ok(v) => {
            list.push(Check { name, holds: false });
            Err(Error::NotCif(format!("{what}: {}", v.detail)))
        }
        Err(e) => {
            list.push(Check { name, holds: false });
            Err(Error::NotCif(format!("{what}: {e}")))
        }
    }
}

/// Requires a uniform MIF; returns its block size.
fn require_mif(family: &SetFamily, what: &str, list: &mut Vec<Check>) -> Result<usize> {
    let verdict = is_mif(family);
    let name = format!("{what} is a MIF");
    match verdict {
        Ok(v) if v.holds => {
            list.push(Check { name, holds: true });
            Ok(family.uniform_k().expect("MIF is uniform"))
        }
        Ok(v) => {
            list.push(Check { name, holds: false });
            Err(Error::NotMif(format!("{what}: {}", v.detail)))
        }
        Err(e) => {
            list.push(Check { name, holds: false });
            Err(Error::NotMif(format!("{what}: {e}")))
        }
    }
}

/// `family`, relabeled with (repeated) `prefix` until it shares no point
/// with `taken`.
pub(crate) fn fresh(family: &SetFamily, taken: &SetFamily, prefix: &str) -> SetFamily {
    let mut out = family.clone();
    while out.shares_points_with(taken) {
        out = out.prefixed(prefix);
    }
    out
}

/// `F ⊔ A ⊛ F^⊤` for a CIF(k,t) `F` and a MIF(k−t) `A`; the result is a
/// MIF(k) with `|F| + |A|·|F^⊤|` blocks. `A` is relabeled with `A:` if it
/// shares points with `F`.
pub fn embed(cif: &SetFamily, mif: &SetFamily) -> Result<CompositionReport> {
    let mut checklist = Vec::new();
    let (k, t, dual) = require_cif(cif, "F", &mut checklist)?;
    let l = require_mif(mif, "A", &mut checklist)?;
    check(&mut checklist, format!("uk(A) = {k} - {t}"), l == k - t, || {
        Error::SizeMismatch {
            expected: k - t,
            found: l,
        }
    })?;
    let a = fresh(mif, cif, "A:");
    let result = cif.union(&a.join(&dual)?)?;
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

/// The product family: for each block `A'` of the MIF(l) `mif`, every
/// union of one block from each factor `F_x`, `x ∈ A'`.
///
/// `factors[i]` belongs to the `i`-th point of `mif`. The factors must be
/// uniform with a common `(k, t)`; the result then has block size `kl`,
/// `τ = tl`, and the analogous product of factor duals as transversals.
/// It is additionally claimed closed when every factor is a CIF whose dual
/// has `τ = k`; with `require_closed` a factor failing that is an error.
///
/// Factors sharing points are relabeled with `{label of x}:`.
pub fn product(mif: &SetFamily, factors: &[SetFamily], require_closed: bool) -> Result<CompositionReport> {
    let mut checklist = Vec::new();
    let l = require_mif(mif, "A", &mut checklist)?;
    let n = mif.num_points();
    check(&mut checklist, format!("{n} factors"), factors.len() == n, || {
        Error::NonUniformFactors(format!("expected {n} factors, got {}", factors.len()))
    })?;
    let mut shape = None;
    for (i, f) in factors.iter().enumerate() {
        let x = mif.label(PointId(i));
        let k = f
            .uniform_k()
            .ok_or_else(|| Error::NonUniformFactors(format!("factor {x} is not uniform")))?;
        let t = transversal::tau(f)?;
        match shape {
            None => shape = Some((k, t)),
            Some(s) if s != (k, t) => {
                checklist.push(Check {
                    name: "common (k, t)".into(),
                    holds: false,
                });
                return Err(Error::NonUniformFactors(format!(
                    "factor {x} has (k, t) = ({k}, {t}), expected {s:?}"
                )));
            }
            Some(_) => {}
        }
    }
    let (k, t) = shape.expect("a MIF has points");
    checklist.push(Check {
        name: format!("common (k, t) = ({k}, {t})"),
        holds: true,
    });

    let overlapping = factors
        .iter()
        .enumerate()
        .any(|(i, f)| factors[i + 1..].iter().any(|g| f.shares_points_with(g)));
    let factors: Vec<SetFamily> = if overlapping {
        factors
            .iter()
            .enumerate()
            .map(|(i, f)| f.prefixed(&format!("{}:", mif.label(PointId(i)))))
            .collect()
    } else {
        factors.to_vec()
    };

    let mut closed = true;
    for (i, f) in factors.iter().enumerate() {
        let x = mif.label(PointId(i)).to_string();
        let cif = is_cif(f).map(|v| v.holds).unwrap_or(false);
        checklist.push(Check {
            name: format!("factor {x} is a CIF"),
            holds: cif,
        });
        if require_closed && !cif {
            return Err(Error::NotCif(format!("factor {x}")));
        }
        let dual_tau = tau_of_dual(f)?;
        checklist.push(Check {
            name: format!("factor {x} has dual tau = {k}"),
            holds: dual_tau == k,
        });
        if require_closed && dual_tau != k {
            return Err(Error::DualTauMismatch {
                factor: x,
                expected: k,
                found: dual_tau,
            });
        }
        closed &= cif && dual_tau == k;
    }

    let duals = factors
        .iter()
        .map(|f| transversal::transversals(f).map(|r| r.transversals))
        .collect::<Result<Vec<_>>>()?;
    let result = assemble(mif, &factors)?;
    let claimed_dual = assemble(mif, &duals)?;
    Ok(CompositionReport {
        result,
        checklist,
        claimed: Claim {
            kind: if closed { ClaimKind::Cif } else { ClaimKind::Uniform },
            k: k * l,
            tau: t * l,
        },
        claimed_dual: Some(claimed_dual),
        core_counts: None,
    })
}

/// Union over blocks `A'` of `mif` of the join of `parts[x]`, `x ∈ A'`.
fn assemble(mif: &SetFamily, parts: &[SetFamily]) -> Result<SetFamily> {
    let mut out = SetFamily::empty();
    for block in mif.blocks() {
        let mut points = block.iter();
        let first = points.next().expect("nonempty block");
        let mut joined = parts[first.0].clone();
        for p in points {
            joined = joined.join(&parts[p.0])?;
        }
        out = out.union(&joined)?;
    }
    Ok(out)
}

/// `H = G ⊔ (F ⊛ G^⊤)` for uniform `F`, `G` with `uk(G) = uk(F) + τ(G)` and
/// `τ(G^⊤) > τ(G) + τ(F)`. Then `H^⊤ = F^⊤ ⊛ G^⊤`; `H` is claimed closed
/// when both inputs are CIFs (required with `require_closed`).
///
/// If `F` and `G` share points they are relabeled with `F:` and `G:`.
pub fn extend(f: &SetFamily, g: &SetFamily, require_closed: bool) -> Result<CompositionReport> {
    let mut checklist = Vec::new();
    let k = f.uniform_k().ok_or(Error::NotUniform)?;
    let g_k = g.uniform_k().ok_or(Error::NotUniform)?;
    let f_tau = transversal::tau(f)?;
    let g_tau = transversal::tau(g)?;
    check(
        &mut checklist,
        format!("uk(G) = uk(F) + tau(G) = {}", k + g_tau),
        g_k == k + g_tau,
        || Error::ShapeMismatch {
            g_k,
            expected: k + g_tau,
        },
    )?;
    let dual_tau = tau_of_dual(g)?;
    let bound = g_tau + f_tau;
    check(
        &mut checklist,
        format!("tau(G^T) = {dual_tau} > {bound}"),
        dual_tau > bound,
        || Error::DualTauTooSmall {
            found: dual_tau,
            bound,
        },
    )?;
    let (f, g) = if f.shares_points_with(g) {
        (f.prefixed("F:"), g.prefixed("G:"))
    } else {
        (f.clone(), g.clone())
    };

    let mut closed = true;
    for (what, fam) in [("F", &f), ("G", &g)] {
        let cif = is_cif(fam).map(|v| v.holds).unwrap_or(false);
        checklist.push(Check {
            name: format!("{what} is a CIF"),
            holds: cif,
        });
        if require_closed && !cif {
            return Err(Error::NotCif(what.to_string()));
        }
        closed &= cif;
    }

    let g_dual = transversal::transversals(&g)?.transversals;
    let f_dual = transversal::transversals(&f)?.transversals;
    let result = g.union(&f.join(&g_dual)?)?;
    let claimed_dual = f_dual.join(&g_dual)?;
    Ok(CompositionReport {
        result,
        checklist,
        claimed: Claim {
            kind: if closed { ClaimKind::Cif } else { ClaimKind::Uniform },
            k: g_k,
            tau: bound,
        },
        claimed_dual: Some(claimed_dual),
        core_counts: None,
    })
}

/// A MIF split at one of its points: `X = F ⊔ α ⊛ F^⊤`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub point: crate::Label,
    /// Blocks avoiding the point.
    pub family: SetFamily,
    /// Blocks through the point, with the point removed.
    pub dual: SetFamily,
    /// `τ` of `family`; the split is a CIF(k, k−1) exactly when this is `k − 1`
    /// and `family` is closed.
    pub tau: usize,
}

/// Splits a MIF(k), `k ≥ 2`, at `point`, checks that the blocks through the
/// point are exactly the transversals of the rest, and that the two parts
/// reassemble to the input.
pub fn decompose_at(mif: &SetFamily, point: PointId) -> Result<Decomposition> {
    let verdict = is_mif(mif)?;
    if !verdict.holds {
        return Err(Error::NotMif(verdict.detail));
    }
    if mif.uniform_k() < Some(2) {
        return Err(Error::InvalidParams(
            "a MIF(1) has no split: removing its point leaves nothing".into(),
        ));
    }
    if point.0 >= mif.num_points() {
        return Err(Error::UnknownPoint(point.to_string()));
    }
    let family = mif.filter(|b| !b.contains(point));
    let through: Vec<_> = mif
        .blocks()
        .iter()
        .filter(|b| b.contains(point))
        .map(|b| b.without(point))
        .collect();
    let dual = SetFamily::from_blocks(mif.labels().to_vec(), through)?;
    let report = transversal::transversals(&family)?;
    if report.transversals != dual {
        return Err(Error::ReconstructionMismatch(format!(
            "{} transversals but {} blocks through the point",
            report.transversals.len(),
            dual.len()
        )));
    }
    let alpha = SetFamily::new(vec![mif.label(point).to_string()], vec![vec![0]])?;
    let rebuilt = family.union(&alpha.join(&dual)?)?;
    if &rebuilt != mif {
        return Err(Error::ReconstructionMismatch("reassembled family differs".into()));
    }
    Ok(Decomposition {
        point: mif.label(point).clone(),
        family,
        dual,
        tau: report.tau,
    })
}
