//! Canonical families of k-separated sets.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kset::{enumerate_containing, KSet, Params};

/// A duplicate-free, lexicographically sorted collection of sets over one
/// [`Params`]. Two families are equal iff their member lists are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    params: Params,
    members: Vec<KSet>,
}

impl Family {
    pub fn empty(params: Params) -> Self {
        Family {
            params,
            members: Vec::new(),
        }
    }

    /// Sorts and deduplicates `members`, rejecting sets built over other parameters.
    pub fn new(params: Params, members: impl IntoIterator<Item = KSet>) -> Result<Self> {
        let mut members: Vec<KSet> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|s| s.params() != params) {
            return Err(Error::Input(format!(
                "set {{{bad}}} belongs to {} but the family is over {params}",
                bad.params()
            )));
        }
        members.sort_unstable();
        members.dedup();
        Ok(Family { params, members })
    }

    /// Builds a family from bitmasks, validating each one.
    pub fn from_masks(params: Params, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let members = masks
            .into_iter()
            .map(|m| KSet::from_mask(params, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, members)
    }

    /// Builds a family from element lists, validating each one.
    pub fn from_elem_lists<S: AsRef<[u32]>>(
        params: Params,
        sets: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let members = sets
            .into_iter()
            .map(|s| KSet::new(params, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, members)
    }

    /// Caller guarantees every mask is a valid member for `params`.
    pub(crate) fn from_masks_unchecked(
        params: Params,
        masks: impl IntoIterator<Item = u64>,
    ) -> Self {
        let mut members: Vec<KSet> = masks
            .into_iter()
            .map(|m| KSet::from_mask_unchecked(params, m))
            .collect();
        members.sort_unstable();
        members.dedup();
        Family { params, members }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn members(&self) -> &[KSet] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, KSet> {
        self.members.iter()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(KSet::mask)
    }

    pub fn contains(&self, set: &KSet) -> bool {
        self.members.binary_search(set).is_ok()
    }

    /// `true` iff every member of `self` is a member of `other`.
    pub fn is_subfamily_of(&self, other: &Family) -> bool {
        self.params == other.params && self.members.iter().all(|s| other.contains(s))
    }

    /// Members of `self` that are not in `other`.
    pub fn difference(&self, other: &Family) -> Family {
        let members = self
            .members
            .iter()
            .filter(|s| !other.contains(s))
            .cloned()
            .collect();
        Family {
            params: self.params,
            members,
        }
    }

    /// Union of families over the same parameters.
    pub fn union<'a>(
        params: Params,
        parts: impl IntoIterator<Item = &'a Family>,
    ) -> Result<Family> {
        let mut members = Vec::new();
        for part in parts {
            if part.params != params {
                return Err(Error::Input(format!(
                    "cannot merge a family over {} into one over {params}",
                    part.params
                )));
            }
            members.extend(part.members.iter().cloned());
        }
        Family::new(params, members)
    }

    /// Serializable form `{"n","k","r","sets"}`.
    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            n: self.params.n,
            k: self.params.k,
            r: self.params.r,
            sets: self.members.iter().map(|s| s.elems().to_vec()).collect(),
        }
    }

    /// Plain-text form: one set per line, elements separated by spaces.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.members {
            let _ = writeln!(out, "{s}");
        }
        out
    }

    pub fn from_lines(params: Params, text: &str) -> Result<Family> {
        let members = text
            .lines()
            .filter(|line| !line.trim().is_empty())
            .map(|line| KSet::parse(params, line))
            .collect::<Result<Vec<_>>>()?;
        Family::new(params, members)
    }

    pub fn from_json_str(text: &str) -> Result<Family> {
        let json: FamilyJson = serde_json::from_str(text)?;
        Family::try_from(json)
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a KSet;
    type IntoIter = std::slice::Iter<'a, KSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// JSON representation of a [`Family`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub sets: Vec<Vec<u32>>,
}

impl TryFrom<FamilyJson> for Family {
    type Error = Error;

    fn try_from(json: FamilyJson) -> Result<Family> {
        let params = Params::new(json.n, json.k, json.r)?;
        Family::from_elem_lists(params, &json.sets)
    }
}

/// Outcome of [`is_intersecting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersecting {
    Yes,
    /// The lexicographically first pair of disjoint members.
    Disjoint(KSet, KSet),
}

impl Intersecting {
    pub fn holds(&self) -> bool {
        matches!(self, Intersecting::Yes)
    }
}

/// Checks that every two members of `f` share an element.
pub fn is_intersecting(f: &Family) -> Intersecting {
    let members = f.members();
    for (i, a) in members.iter().enumerate() {
        if let Some(b) = members[i + 1..].iter().find(|b| !a.intersects(b)) {
            return Intersecting::Disjoint(a.clone(), b.clone());
        }
    }
    Intersecting::Yes
}

/// Mask-level intersecting test.
pub(crate) fn masks_intersecting(masks: &[u64]) -> bool {
    masks
        .iter()
        .enumerate()
        .all(|(i, &a)| masks[i + 1..].iter().all(|&b| a & b != 0))
}

fn check_element(p: Params, a: u32) -> Result<()> {
    if a == 0 || a > p.n {
        return Err(Error::Input(format!("element {a} outside 1..={}", p.n)));
    }
    Ok(())
}

/// `F(i)`: the members containing `i`, each with `i` removed.
///
/// The result keeps the ground set `[n]` and has set size `r - 1`. Removing an
/// element only widens gaps, so the members stay k-separated on the same circle.
pub fn trace(f: &Family, i: u32) -> Result<Family> {
    let p = f.params();
    check_element(p, i)?;
    if p.r == 0 {
        return Err(Error::Input("cannot trace a family of empty sets".into()));
    }
    let reduced = p.with_r(p.r - 1)?;
    let drop = 1u64 << (i - 1);
    Ok(Family::from_masks_unchecked(
        reduced,
        f.masks().filter(|m| m & drop != 0).map(|m| m & !drop),
    ))
}

/// `F_{i,j}`: the members containing both `i` and `j`.
pub fn restrict_pair(f: &Family, i: u32, j: u32) -> Result<Family> {
    let p = f.params();
    check_element(p, i)?;
    check_element(p, j)?;
    if i == j {
        return Err(Error::Input(format!(
            "pair restriction needs i != j, got {i} twice"
        )));
    }
    let both = (1u64 << (i - 1)) | (1u64 << (j - 1));
    Ok(Family {
        params: p,
        members: f
            .iter()
            .filter(|s| s.mask() & both == both)
            .cloned()
            .collect(),
    })
}

/// All members of `[n]^(r)_k` containing `x`.
pub fn star(p: Params, x: u32) -> Result<Family> {
    check_element(p, x)?;
    if !p.is_nonempty() {
        return Err(Error::Precondition(format!(
            "{p} has no k-separated sets (needs n >= (k+1) r)"
        )));
    }
    Ok(Family {
        params: p,
        members: enumerate_containing(p, x),
    })
}

/// Set of masks for quick membership checks.
pub(crate) fn mask_set(f: &Family) -> BTreeSet<u64> {
    f.masks().collect()
}
