//! The shift `f`, the compressed family `A*`, and the decomposition of `A*`
//! into `C*` and `D` together with the reduced family `C` on the circle of
//! length `n - k - 1`.
//!
//! For an intersecting family `A` of k-separated r-sets on `[n]`, with `k >= 1`,
//! `r >= 2` and `n >= (k+1) r + 1`:
//!
//! * `f(S) = S - {n} + {n-1}` when `n ∈ S` and `n-k-1 ∉ S`, otherwise `f(S) = S`;
//! * `A* = { f(S) : S ∈ A } ∪ { S ∈ A : f(S) ∈ A }`;
//! * `C = A*(n) ∪ ⋃_{i=1..k} A*_{i, n-k-1+i}(n-k-1+i)`, sets of size `r - 1`
//!   that should live in `[n-k-1]^(r-1)_k`;
//! * `C* = A*_n ∪ ⋃_i A*_{i, n-k-1+i}` and `D = A* \ C*`, which should live
//!   in `[n-1]^(r)_k`.
//!
//! Nothing here assumes those containments: every claim is recomputed and
//! reported as a [`Verdict`].

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{
    is_intersecting, mask_set, masks_intersecting, restrict_pair, trace, Family, Intersecting,
};
use crate::kset::{bit, is_k_separated, mask_elems, KSet, Params};

fn require_shift_regime(p: Params) -> Result<()> {
    if p.k == 0 {
        return Err(Error::UnsupportedRegime(
            "the shift is only defined for k >= 1".into(),
        ));
    }
    Ok(())
}

/// Mask-level shift; `p.k >= 1` and `p.n >= k + 2` assumed.
#[inline]
fn shift_mask(p: Params, mask: u64) -> u64 {
    let top = bit(p.n);
    let guard = p.n as i64 - p.k as i64 - 1;
    let guard_present = guard >= 1 && mask & bit(guard as u32) != 0;
    if mask & top != 0 && !guard_present {
        (mask & !top) | bit(p.n - 1)
    } else {
        mask
    }
}

/// The shift `f`: moves `n` to `n - 1` when `n - k - 1` is absent.
pub fn shift(s: &KSet) -> Result<KSet> {
    let p = s.params();
    require_shift_regime(p)?;
    if p.n < 2 {
        return Ok(s.clone());
    }
    let image = shift_mask(p, s.mask());
    if image == s.mask() {
        return Ok(s.clone());
    }
    // Closure is checked rather than assumed.
    KSet::from_mask(p, image)
}

/// `A* = { f(S) : S ∈ A } ∪ { S ∈ A : f(S) ∈ A }`.
pub fn compress_family(a: &Family) -> Result<Family> {
    let p = a.params();
    require_shift_regime(p)?;
    let originals = mask_set(a);
    let mut out = BTreeSet::new();
    for s in a {
        let image = shift(s)?.mask();
        out.insert(image);
        if originals.contains(&image) {
            out.insert(s.mask());
        }
    }
    Ok(Family::from_masks_unchecked(p, out))
}

/// Identifier and outcome of one checked claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// `false` when the claim does not apply to these parameters (it then passes).
    pub applicable: bool,
}

/// Names of the nine checks, in order.
pub const VERDICT_NAMES: [&str; 9] = [
    "compressed_size_preserved",
    "trace_at_n_intersecting",
    "c_intersecting",
    "c_within_smaller_circle",
    "d_within_circle_minus_one",
    "d_intersecting",
    "c_pieces_disjoint",
    "size_splits_over_c_star_and_d",
    "k1_construction_agrees",
];

/// Everything computed by one decomposition step.
#[derive(Debug, Clone)]
pub struct CompressionTrace {
    pub params: Params,
    pub a: Family,
    pub a_star: Family,
    /// `A*_n`: members of `A*` containing `n`.
    pub a_star_n: Family,
    /// `A*(n)`: `A*_n` with `n` removed, over `[n]`.
    pub trace_n: Family,
    /// `A*_{i, n-k-1+i}` for `i = 1..=k`.
    pub pair_parts: Vec<Family>,
    /// `A*_{i, n-k-1+i}(n-k-1+i)` for `i = 1..=k`, over `[n]`.
    pub pair_traces: Vec<Family>,
    /// `C` re-read on the circle of length `n - k - 1`.
    pub c: Family,
    /// Members of `C` that are not k-separated (r-1)-sets of `[n-k-1]`.
    pub c_outside: Vec<Vec<u32>>,
    pub c_star: Family,
    /// `D = A* \ C*`, over `[n]`.
    pub d: Family,
    /// `D` re-read on the circle of length `n - 1`.
    pub d_reindexed: Family,
    /// Members of `D` that are not k-separated r-sets of `[n-1]`.
    pub d_outside: Vec<Vec<u32>>,
    pub verdicts: Vec<Verdict>,
    /// Whether `A*` itself is intersecting. Recorded, never asserted.
    pub a_star_intersecting: bool,
}

impl CompressionTrace {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn report(&self) -> ProofReport {
        ProofReport {
            params: self.params,
            family_size: self.a.len(),
            verdicts: self.verdicts.clone(),
            a_star_intersecting: self.a_star_intersecting,
        }
    }

    pub fn to_json(&self, include_members: bool) -> TraceJson {
        let lists = |f: &Family| f.iter().map(|s| s.elems().to_vec()).collect::<Vec<_>>();
        TraceJson {
            n: self.params.n,
            k: self.params.k,
            r: self.params.r,
            sizes: PartSizes {
                a: self.a.len(),
                a_star: self.a_star.len(),
                a_star_n: self.a_star_n.len(),
                pair_parts: self.pair_parts.iter().map(Family::len).collect(),
                c: self.c.len() + self.c_outside.len(),
                c_star: self.c_star.len(),
                d: self.d.len(),
            },
            verdicts: self
                .verdicts
                .iter()
                .map(|v| (v.name.to_string(), v.passed))
                .collect(),
            all_passed: self.all_passed(),
            a_star_intersecting: self.a_star_intersecting,
            members: include_members.then(|| TraceMembers {
                a: lists(&self.a),
                a_star: lists(&self.a_star),
                a_star_n: lists(&self.a_star_n),
                pair_parts: self.pair_parts.iter().map(lists).collect(),
                c: lists(&self.c),
                c_outside: self.c_outside.clone(),
                c_star: lists(&self.c_star),
                d: lists(&self.d),
                d_outside: self.d_outside.clone(),
            }),
        }
    }
}

/// Verdicts of [`check_proof_invariants`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub params: Params,
    pub family_size: usize,
    pub verdicts: Vec<Verdict>,
    pub a_star_intersecting: bool,
}

impl ProofReport {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartSizes {
    pub a: usize,
    pub a_star: usize,
    pub a_star_n: usize,
    pub pair_parts: Vec<usize>,
    pub c: usize,
    pub c_star: usize,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceMembers {
    pub a: Vec<Vec<u32>>,
    pub a_star: Vec<Vec<u32>>,
    pub a_star_n: Vec<Vec<u32>>,
    pub pair_parts: Vec<Vec<Vec<u32>>>,
    pub c: Vec<Vec<u32>>,
    pub c_outside: Vec<Vec<u32>>,
    pub c_star: Vec<Vec<u32>>,
    pub d: Vec<Vec<u32>>,
    pub d_outside: Vec<Vec<u32>>,
}

/// JSON form of a [`CompressionTrace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceJson {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub sizes: PartSizes,
    pub verdicts: BTreeMap<String, bool>,
    pub all_passed: bool,
    pub a_star_intersecting: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub members: Option<TraceMembers>,
}

/// Checks the hypotheses of one decomposition step.
pub fn check_preconditions(a: &Family) -> Result<()> {
    let p = a.params();
    require_shift_regime(p)?;
    if p.r < 2 {
        return Err(Error::Precondition(format!(
            "r = {} but r >= 2 is required",
            p.r
        )));
    }
    if (p.k as u64 + 1) * p.r as u64 + 1 > p.n as u64 {
        return Err(Error::Precondition(format!(
            "n = {} but n >= (k+1) r + 1 = {} is required",
            p.n,
            (p.k + 1) * p.r + 1
        )));
    }
    if let Intersecting::Disjoint(x, y) = is_intersecting(a) {
        return Err(Error::Precondition(format!(
            "family is not intersecting: {{{x}}} and {{{y}}} are disjoint"
        )));
    }
    Ok(())
}

/// Splits `masks` into those that are k-separated `size`-sets of the circle
/// `1..=len` and the rest.
fn revalidate(masks: &BTreeSet<u64>, len: u32, k: u32) -> (Vec<u64>, Vec<Vec<u32>>) {
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for &m in masks {
        let elems = mask_elems(m);
        let fits = elems.iter().all(|&a| a <= len)
            && is_k_separated(&elems, len, k).expect("mask elements are ascending and positive");
        if fits {
            inside.push(m);
        } else {
            outside.push(elems);
        }
    }
    (inside, outside)
}

/// `B = {S ∈ A* : 1, n-1 ∈ S}` and `B(n-1) ∪ A*(n)`, computed directly on masks.
fn k1_construction(a_star: &Family) -> (BTreeSet<u64>, BTreeSet<u64>) {
    let n = a_star.params().n;
    let (one, penultimate, top) = (bit(1), bit(n - 1), bit(n));
    let b: BTreeSet<u64> = a_star
        .masks()
        .filter(|m| m & one != 0 && m & penultimate != 0)
        .collect();
    let c = b
        .iter()
        .map(|m| m & !penultimate)
        .chain(a_star.masks().filter(|m| m & top != 0).map(|m| m & !top))
        .collect();
    (b, c)
}

/// Computes `A*`, its pieces, `C`, `C*` and `D`, and evaluates every check.
pub fn build_decomposition(a: &Family) -> Result<CompressionTrace> {
    check_preconditions(a)?;
    let p = a.params();
    let (n, k, r) = (p.n, p.k, p.r);

    let a_star = compress_family(a)?;
    let a_star_n = Family::new(p, a_star.iter().filter(|s| s.contains(n)).cloned())?;
    let trace_n = trace(&a_star, n)?;

    let mut pair_parts = Vec::with_capacity(k as usize);
    let mut pair_traces = Vec::with_capacity(k as usize);
    for i in 1..=k {
        let j = n - k - 1 + i;
        let part = restrict_pair(&a_star, i, j)?;
        pair_traces.push(trace(&part, j)?);
        pair_parts.push(part);
    }

    // C as a set of masks on the ambient circle.
    let mut c_masks: BTreeSet<u64> = trace_n.masks().collect();
    for t in &pair_traces {
        c_masks.extend(t.masks());
    }
    let piece_total = trace_n.len() + pair_traces.iter().map(Family::len).sum::<usize>();

    let c_params = Params::new(n - k - 1, k, r - 1)?;
    let (c_inside, c_outside) = revalidate(&c_masks, c_params.n, k);
    let c = Family::from_masks_unchecked(c_params, c_inside);

    let c_star = Family::union(p, std::iter::once(&a_star_n).chain(&pair_parts))?;
    let d = a_star.difference(&c_star);

    let d_params = Params::new(n - 1, k, r)?;
    let (d_inside, d_outside) = revalidate(&mask_set(&d), d_params.n, k);
    let d_reindexed = Family::from_masks_unchecked(d_params, d_inside);

    let c_mask_list: Vec<u64> = c_masks.iter().copied().collect();
    let trace_n_masks: Vec<u64> = trace_n.masks().collect();
    let d_masks: Vec<u64> = d.masks().collect();
    let c_star_and_d_partition = c_star.is_subfamily_of(&a_star)
        && d.iter().all(|s| !c_star.contains(s))
        && Family::union(p, [&c_star, &d])? == a_star;

    let (k1_applicable, k1_passed) = if k == 1 {
        let (b, c_direct) = k1_construction(&a_star);
        (true, mask_set(&pair_parts[0]) == b && c_direct == c_masks)
    } else {
        (false, true)
    };

    let outcomes = [
        (a_star.len() == a.len(), true),
        (masks_intersecting(&trace_n_masks), true),
        (masks_intersecting(&c_mask_list), true),
        (c_outside.is_empty(), true),
        (d_outside.is_empty(), true),
        (masks_intersecting(&d_masks), true),
        (
            piece_total == c_masks.len() && c_masks.len() == c_star.len(),
            true,
        ),
        (
            c_star_and_d_partition && a.len() == c_star.len() + d.len(),
            true,
        ),
        (k1_passed, k1_applicable),
    ];
    let verdicts = outcomes
        .iter()
        .zip(VERDICT_NAMES)
        .enumerate()
        .map(|(idx, (&(passed, applicable), name))| Verdict {
            id: idx as u8 + 1,
            name,
            passed,
            applicable,
        })
        .collect();

    let a_star_intersecting = is_intersecting(&a_star).holds();
    Ok(CompressionTrace {
        params: p,
        a: a.clone(),
        a_star,
        a_star_n,
        trace_n,
        pair_parts,
        pair_traces,
        c,
        c_outside,
        c_star,
        d,
        d_reindexed,
        d_outside,
        verdicts,
        a_star_intersecting,
    })
}

/// Runs [`build_decomposition`] and returns its verdicts.
pub fn check_proof_invariants(a: &Family) -> Result<ProofReport> {
    build_decomposition(a).map(|t| t.report())
}
