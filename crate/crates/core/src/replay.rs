//! Recursive replay of the induction on `n`: every internal node splits its
//! family into `C` (on the circle of length `n - k - 1`, sets of size
//! `r - 1`) and `D` (on the circle of length `n - 1`), recurses on both, and
//! checks `|A| = |C| + |D| <= binom(n-kr-2, r-2) + binom(n-kr-2, r-1) = binom(n-kr-1, r-1)`.

use serde::Serialize;

use crate::binomial::{binomial, star_bound};
use crate::compression::{build_decomposition, check_preconditions};
use crate::error::{Error, Result};
use crate::family::{is_intersecting, Family};

/// Why a node needs no further decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafReason {
    /// `r = 1`: distinct singletons never meet.
    Singletons,
    /// `n = (k+1) r`: the `k + 1` admissible sets are pairwise disjoint.
    Threshold,
    /// `n <= 4`.
    SmallCircle,
    /// No members.
    Empty,
    /// The family handed down is not intersecting, so the step cannot run.
    NotIntersecting,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Step {
    Leaf {
        reason: LeafReason,
    },
    Split {
        /// `bound(C) + bound(D) == bound`.
        pascal: bool,
        /// `|A| == |C| + |D|`.
        sizes_add_up: bool,
        /// All of `C` and `D` fit their smaller circles.
        contained: bool,
        c: Box<Certificate>,
        d: Box<Certificate>,
    },
}

/// One node of the certificate tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub size: usize,
    /// `binom(n - kr - 1, r - 1)`.
    pub bound: u64,
    pub intersecting: bool,
    /// The local inequality and bookkeeping at this node.
    pub holds: bool,
    pub step: Step,
}

impl Certificate {
    /// `true` iff this node and all its descendants hold.
    pub fn certified(&self) -> bool {
        self.holds
            && match &self.step {
                Step::Leaf { .. } => true,
                Step::Split { c, d, .. } => c.certified() && d.certified(),
            }
    }

    pub fn node_count(&self) -> usize {
        1 + match &self.step {
            Step::Leaf { .. } => 0,
            Step::Split { c, d, .. } => c.node_count() + d.node_count(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + match &self.step {
            Step::Leaf { .. } => 0,
            Step::Split { c, d, .. } => c.depth().max(d.depth()),
        }
    }
}

/// Replays the induction on an intersecting family with `k >= 1`.
pub fn replay_induction(a: &Family) -> Result<Certificate> {
    let p = a.params();
    if p.k == 0 {
        return Err(Error::UnsupportedRegime(
            "the induction is only defined for k >= 1".into(),
        ));
    }
    if p.r == 0 {
        return Err(Error::Precondition("r >= 1 is required".into()));
    }
    if !is_intersecting(a).holds() {
        // Reuse the message naming the disjoint pair.
        check_preconditions(a)?;
    }
    node(a)
}

fn node(a: &Family) -> Result<Certificate> {
    let p = a.params();
    let (n, k, r) = (p.n, p.k, p.r);
    let bound = star_bound(n, k, r)?;
    let size = a.len();
    let intersecting = is_intersecting(a).holds();

    let leaf = if !intersecting {
        Some(LeafReason::NotIntersecting)
    } else if r == 1 {
        Some(LeafReason::Singletons)
    } else if (k as u64 + 1) * r as u64 == n as u64 {
        Some(LeafReason::Threshold)
    } else if n <= 4 {
        Some(LeafReason::SmallCircle)
    } else if a.is_empty() {
        Some(LeafReason::Empty)
    } else {
        None
    };

    if let Some(reason) = leaf {
        return Ok(Certificate {
            n,
            k,
            r,
            size,
            bound,
            intersecting,
            holds: intersecting && size as u64 <= bound,
            step: Step::Leaf { reason },
        });
    }

    let t = build_decomposition(a)?;
    let c = node(&t.c)?;
    let d = node(&t.d_reindexed)?;
    let (n, k, r) = (n as i64, k as i64, r as i64);
    let pascal = c.bound == binomial(n - k * r - 2, r - 2)?
        && d.bound == binomial(n - k * r - 2, r - 1)?
        && c.bound + d.bound == bound;
    let contained = t.c_outside.is_empty() && t.d_outside.is_empty();
    let sizes_add_up = size == t.c.len() + t.d_reindexed.len() && contained;
    let holds = pascal && sizes_add_up && size as u64 <= bound;
    Ok(Certificate {
        n: p.n,
        k: p.k,
        r: p.r,
        size,
        bound,
        intersecting,
        holds,
        step: Step::Split {
            pascal,
            sizes_add_up,
            contained,
            c: Box::new(c),
            d: Box::new(d),
        },
    })
}
