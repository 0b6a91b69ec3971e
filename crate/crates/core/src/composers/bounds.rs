//! Closed-form lower bounds on `M(k)`, the largest block count of a MIF(k).

use serde::Serialize;

use crate::error::{Error, Result};

/// One evaluation of the cycle-family lower bound
/// `M(k) ≥ |G(k,t)|_min + |G(k,t)^⊤| · M(k − t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundTable {
    pub k: u64,
    pub t: u64,
    pub r: u64,
    /// `k − t`, the order whose `M` value is supplied as `base`.
    pub reduced_order: u64,
    pub base: u128,
    /// Guaranteed number of blocks of `G(k,t)`.
    pub block_term: u128,
    /// Number of transversals of `G(k,t)`.
    pub dual_term: u128,
    pub bound: u128,
}

/// For `t = 2r − 1`: `(2r−1)(k−r+1)^{r−1} + (k−r+1)^{2r−1}·base`;
/// for `t = 2r`: `2r(k−r)^{r−1} + (k−r)^r (k−r+1)^r·base`.
pub fn lower_bound(k: u64, t: u64, base: u128) -> Result<BoundTable> {
    if t < 1 || k < t + 1 {
        return Err(Error::InvalidParams(format!(
            "lower bound needs 1 <= t <= k - 1, got k = {k}, t = {t}"
        )));
    }
    if base < 1 {
        return Err(Error::InvalidParams("base value must be at least 1".into()));
    }
    let r = (t + 1) / 2;
    let pow = |b: u64, e: u64| -> Result<u128> {
        let e = u32::try_from(e).map_err(|_| Error::Overflow)?;
        (b as u128).checked_pow(e).ok_or(Error::Overflow)
    };
    let (block_term, dual_term) = if t % 2 == 1 {
        let q = k - r + 1;
        (
            ((2 * r - 1) as u128)
                .checked_mul(pow(q, r - 1)?)
                .ok_or(Error::Overflow)?,
            pow(q, 2 * r - 1)?,
        )
    } else {
        (
            ((2 * r) as u128)
                .checked_mul(pow(k - r, r - 1)?)
                .ok_or(Error::Overflow)?,
            pow(k - r, r)?
                .checked_mul(pow(k - r + 1, r)?)
                .ok_or(Error::Overflow)?,
        )
    };
    let bound = dual_term
        .checked_mul(base)
        .and_then(|d| d.checked_add(block_term))
        .ok_or(Error::Overflow)?;
    Ok(BoundTable {
        k,
        t,
        r,
        reduced_order: k - t,
        base,
        block_term,
        dual_term,
        bound,
    })
}

/// `(k/2 + 1)^{k−1}` for even `k`, `((k+1)/2)^{(k−1)/2} ((k+3)/2)^{(k−1)/2}`
/// for odd `k`.
pub fn corollary_bound(k: u64) -> Result<u128> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("corollary bound needs k >= 2, got {k}")));
    }
    let pow = |b: u64, e: u64| -> Result<u128> {
        let e = u32::try_from(e).map_err(|_| Error::Overflow)?;
        (b as u128).checked_pow(e).ok_or(Error::Overflow)
    };
    if k % 2 == 0 {
        pow(k / 2 + 1, k - 1)
    } else {
        let h = (k - 1) / 2;
        pow((k + 1) / 2, h)?
            .checked_mul(pow((k + 3) / 2, h)?)
            .ok_or(Error::Overflow)
    }
}
