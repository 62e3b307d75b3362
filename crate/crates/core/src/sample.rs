//! Seeded generators of intersecting families, used as inputs for the
//! compression checks.
//!
//! All randomness comes from a `ChaCha8Rng` seeded from the explicit inputs,
//! so a `(params, seed, density, mode)` tuple always yields the same family.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{star, Family};
use crate::kset::{enumerate_k_separated, KSet, Params};

/// Number of reseeded attempts made by [`SampleMode::ShiftActive`].
pub const SHIFT_ACTIVE_RETRIES: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    /// Shuffle all sets, accept each compatible one with probability `density`.
    Greedy,
    /// Keep a random part of a random star, then augment greedily.
    StarSeeded,
    /// Greedy, retried until some member is moved by the shift.
    ShiftActive,
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleMode::Greedy => "greedy",
            SampleMode::StarSeeded => "star-seeded",
            SampleMode::ShiftActive => "shift-active",
        })
    }
}

impl FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(SampleMode::Greedy),
            "star-seeded" => Ok(SampleMode::StarSeeded),
            "shift-active" => Ok(SampleMode::ShiftActive),
            other => Err(Error::Input(format!("unknown sample mode {other:?}"))),
        }
    }
}

/// A sampled family together with what the sampler knows about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub family: Family,
    /// Star centre chosen by [`SampleMode::StarSeeded`].
    pub centre: Option<u32>,
    /// Some member contains `n` but not `n - k - 1`.
    pub shift_eligible: bool,
    /// Generator runs used; above 1 only for [`SampleMode::ShiftActive`].
    pub attempts: u32,
}

/// `true` iff `s` contains `n` and not `n - k - 1`, so the shift moves it.
pub fn is_shift_eligible(s: &KSet) -> bool {
    let p = s.params();
    let below = p.n as i64 - p.k as i64 - 1;
    s.contains(p.n) && (below < 1 || !s.contains(below as u32))
}

/// Draws a seeded intersecting family from `[n]^(r)_k`.
pub fn sample_intersecting(p: Params, seed: u64, density: f64, mode: SampleMode) -> Result<Sample> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Input(format!("density {density} outside [0, 1]")));
    }
    if !p.is_nonempty() {
        return Err(Error::Precondition(format!(
            "{p} has no k-separated sets (needs n >= (k+1) r)"
        )));
    }
    let universe = enumerate_k_separated(p);
    match mode {
        SampleMode::Greedy => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let family = greedy(p, &universe, Vec::new(), density, &mut rng);
            Ok(finish(family, None, 1))
        }
        SampleMode::StarSeeded => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let centre = rng.gen_range(1..=p.n);
            let seeded: Vec<KSet> = star(p, centre)?
                .iter()
                .filter(|_| rng.gen_bool(density))
                .cloned()
                .collect();
            let family = greedy(p, &universe, seeded, density, &mut rng);
            Ok(finish(family, Some(centre), 1))
        }
        SampleMode::ShiftActive => {
            let mut last = None;
            for attempt in 0..SHIFT_ACTIVE_RETRIES {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(attempt as u64);
                let family = greedy(p, &universe, Vec::new(), density, &mut rng);
                let sample = finish(family, None, attempt + 1);
                if sample.shift_eligible {
                    return Ok(sample);
                }
                last = Some(sample);
            }
            Ok(last.expect("at least one attempt is made"))
        }
    }
}

fn greedy(
    p: Params,
    universe: &[KSet],
    mut chosen: Vec<KSet>,
    density: f64,
    rng: &mut ChaCha8Rng,
) -> Family {
    let mut order: Vec<&KSet> = universe.iter().collect();
    order.shuffle(rng);
    for candidate in order {
        if chosen.contains(candidate) || !chosen.iter().all(|c| c.intersects(candidate)) {
            continue;
        }
        if rng.gen_bool(density) {
            chosen.push(candidate.clone());
        }
    }
    Family::new(p, chosen).expect("universe members share the parameters")
}

fn finish(family: Family, centre: Option<u32>, attempts: u32) -> Sample {
    let shift_eligible = family.iter().any(is_shift_eligible);
    Sample {
        family,
        centre,
        shift_eligible,
        attempts,
    }
}
