//! Circular ground sets and their k-separated subsets.
//!
//! Positions are 1-based, `1..=n`, arranged clockwise on a circle. A set
//! `{a_1 < ... < a_r}` is k-separated when every two cyclically consecutive
//! members have at least `k` unused positions between them, including the
//! wrap-around gap from `a_r` back to `a_1 + n`. Sets are stored as a `u64`
//! bitmask with bit `a - 1` standing for position `a`, so `n <= 64`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::binomial::binomial;
use crate::error::{Error, Result};

/// Largest supported circle length.
pub const MAX_N: u32 = 64;

/// The triple `(n, k, r)`: circle length, separation gap and set size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub k: u32,
    pub r: u32,
}

impl Params {
    /// Validates `1 <= n <= 64`.
    ///
    /// `r = 0` is accepted so that traces of singleton families stay
    /// representable; callers that need `r >= 1` check it themselves.
    pub fn new(n: u32, k: u32, r: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidParams(format!(
                "circle length n = {n} must lie in 1..={MAX_N}"
            )));
        }
        Ok(Params { n, k, r })
    }

    /// `true` iff `[n]^(r)_k` has at least one member, i.e. `n >= (k+1) r`.
    pub fn is_nonempty(&self) -> bool {
        self.r == 0 || (self.k as u64 + 1) * self.r as u64 <= self.n as u64
    }

    /// Mask with one bit per position on the circle.
    pub fn ground_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn with_n(self, n: u32) -> Result<Self> {
        Params::new(n, self.k, self.r)
    }

    pub fn with_r(self, r: u32) -> Result<Self> {
        Params::new(self.n, self.k, r)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={}, r={})", self.n, self.k, self.r)
    }
}

#[inline]
pub(crate) const fn bit(a: u32) -> u64 {
    1u64 << (a - 1)
}

/// Ascending positions of the set bits of `mask`.
pub fn mask_elems(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() + 1);
        mask &= mask - 1;
    }
    out
}

/// Checks that `elems` is strictly ascending inside `1..=n`.
fn validate_elems(elems: &[u32], n: u32) -> Result<()> {
    for (idx, &a) in elems.iter().enumerate() {
        if a == 0 || a > n {
            return Err(Error::Input(format!("element {a} outside 1..={n}")));
        }
        if idx > 0 && elems[idx - 1] >= a {
            return Err(Error::Input(format!(
                "elements not strictly ascending: {} then {a}",
                elems[idx - 1]
            )));
        }
    }
    Ok(())
}

/// Decides whether the ascending list `elems` is k-separated on the circle of
/// length `n`.
///
/// Every consecutive gap `a_{i+1} - a_i` and the wrap gap `a_1 + n - a_r` must
/// exceed `k`. A single element is separated iff `n > k`; the empty set always is.
pub fn is_k_separated(elems: &[u32], n: u32, k: u32) -> Result<bool> {
    validate_elems(elems, n)?;
    let (first, last) = match (elems.first(), elems.last()) {
        (Some(&first), Some(&last)) => (first as u64, last as u64),
        _ => return Ok(true),
    };
    let k = k as u64;
    let inner = elems.windows(2).all(|w| w[1] as u64 > w[0] as u64 + k);
    Ok(inner && first + n as u64 > last + k)
}

/// One k-separated `r`-subset of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KSet {
    params: Params,
    mask: u64,
    elems: Vec<u32>,
}

impl KSet {
    /// Builds a set from ascending elements, validating size and separation.
    pub fn new(params: Params, elems: &[u32]) -> Result<Self> {
        if elems.len() != params.r as usize {
            return Err(Error::Input(format!(
                "set {elems:?} has {} elements, expected r = {}",
                elems.len(),
                params.r
            )));
        }
        if !is_k_separated(elems, params.n, params.k)? {
            return Err(Error::Input(format!(
                "set {elems:?} is not {}-separated on the circle of length {}",
                params.k, params.n
            )));
        }
        Ok(Self::from_parts(params, elems.to_vec()))
    }

    /// Builds a set from its bitmask, validating it.
    pub fn from_mask(params: Params, mask: u64) -> Result<Self> {
        if mask & !params.ground_mask() != 0 {
            return Err(Error::Input(format!(
                "mask {mask:#x} has bits outside 1..={}",
                params.n
            )));
        }
        Self::new(params, &mask_elems(mask))
    }

    fn from_parts(params: Params, elems: Vec<u32>) -> Self {
        let mask = elems.iter().fold(0u64, |m, &a| m | bit(a));
        KSet {
            params,
            mask,
            elems,
        }
    }

    /// Skips validation; callers guarantee the mask is a member of `[n]^(r)_k`.
    pub(crate) fn from_mask_unchecked(params: Params, mask: u64) -> Self {
        debug_assert_eq!(mask.count_ones(), params.r);
        KSet {
            params,
            mask,
            elems: mask_elems(mask),
        }
    }

    /// Parses the canonical text form, e.g. `"1 4 7"`.
    pub fn parse(params: Params, text: &str) -> Result<Self> {
        let elems = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| Error::Input(format!("not an element: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, &elems)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, a: u32) -> bool {
        a >= 1 && a <= self.params.n && self.mask & bit(a) != 0
    }

    pub fn intersects(&self, other: &KSet) -> bool {
        self.mask & other.mask != 0
    }

    /// Rotates every element clockwise by `d` positions: `a -> ((a - 1 + d) mod n) + 1`.
    pub fn rotate(&self, d: i64) -> KSet {
        let n = self.params.n as i64;
        let mut elems: Vec<u32> = self
            .elems
            .iter()
            .map(|&a| ((a as i64 - 1 + d).rem_euclid(n) + 1) as u32)
            .collect();
        elems.sort_unstable();
        Self::from_parts(self.params, elems)
    }
}

impl Ord for KSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elems
            .cmp(&other.elems)
            .then_with(|| self.params.cmp(&other.params))
    }
}

impl PartialOrd for KSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, a) in self.elems.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Rotates `s` by `d` positions; see [`KSet::rotate`].
pub fn rotate_set(s: &KSet, d: i64) -> KSet {
    s.rotate(d)
}

/// Depth-first construction of the members of `[n]^(r)_k` whose smallest
/// element lies in `first_lo..=first_hi`, in lexicographic order.
fn enumerate_with_first(p: Params, first_lo: u32, first_hi: u32) -> Vec<KSet> {
    let mut out = Vec::new();
    if p.r == 0 {
        out.push(KSet::from_parts(p, Vec::new()));
        return out;
    }
    if !p.is_nonempty() {
        return out;
    }
    let (n, k, r) = (p.n as i64, p.k as i64, p.r as i64);
    let step = k + 1;
    // a_1 + (r-1)(k+1) <= n keeps room for the remaining elements.
    let hi = (first_hi as i64).min(n - (r - 1) * step);
    let mut stack = Vec::with_capacity(p.r as usize);
    for first in first_lo as i64..=hi {
        // Wrap condition a_r < a_1 + n - k.
        let last_cap = n.min(first + n - k - 1);
        stack.clear();
        stack.push(first as u32);
        extend(p, last_cap, &mut stack, &mut out);
    }
    out
}

fn extend(p: Params, last_cap: i64, stack: &mut Vec<u32>, out: &mut Vec<KSet>) {
    let (k, r) = (p.k as i64, p.r as i64);
    let chosen = stack.len() as i64;
    if chosen == r {
        out.push(KSet::from_parts(p, stack.clone()));
        return;
    }
    let prev = *stack.last().expect("first element is always pushed") as i64;
    let hi = last_cap - (r - 1 - chosen) * (k + 1);
    for next in prev + k + 1..=hi {
        stack.push(next as u32);
        extend(p, last_cap, stack, out);
        stack.pop();
    }
}

/// Every member of `[n]^(r)_k` exactly once, in lexicographic order.
///
/// Empty when `n < (k+1) r`.
pub fn enumerate_k_separated(p: Params) -> Vec<KSet> {
    enumerate_with_first(p, 1, p.n)
}

/// The members of `[n]^(r)_k` that contain `x`, in lexicographic order.
pub(crate) fn enumerate_containing(p: Params, x: u32) -> Vec<KSet> {
    if p.r == 0 {
        return Vec::new();
    }
    let mut sets: Vec<KSet> = enumerate_with_first(p, 1, 1)
        .into_iter()
        .map(|s| s.rotate(x as i64 - 1))
        .collect();
    sets.sort_unstable();
    sets
}

/// `|[n]^(r)_k|` from the closed form `n / (n - kr) * binom(n - kr, r)`.
pub fn count_k_separated(p: Params) -> Result<u64> {
    if p.r == 0 {
        return Ok(1);
    }
    if !p.is_nonempty() {
        return Ok(0);
    }
    let n = p.n as i64;
    let free = n - p.k as i64 * p.r as i64;
    let inner = binomial(free, p.r as i64)? as u128;
    let count = n as u128 * inner / free as u128;
    u64::try_from(count).map_err(|_| Error::Overflow(free, p.r as i64))
}
