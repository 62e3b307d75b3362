//! Intersecting families of k-separated sets on a circle.
//!
//! A set of positions on the circle `1..=n` is k-separated when any two of its
//! members have at least `k` unchosen positions between them. The largest
//! intersecting family of k-separated r-sets has `binom(n - kr - 1, r - 1)`
//! members whenever `n >= (k+1) r`, attained by the star of any position.
//!
//! The crate provides:
//!
//! * [`kset`]: enumeration and counting of k-separated sets;
//! * [`family`]: canonical families, traces, pair restrictions and stars;
//! * [`graph`]: compatibility graphs whose cliques are intersecting families;
//! * [`sample`]: seeded generators of intersecting families;
//! * [`compression`]: the shift, the compressed family and the checked
//!   decomposition used in the induction on `n`;
//! * [`replay`]: the full induction replayed on a concrete family;
//! * [`search`]: exact maximum intersecting families and bound sweeps.

pub mod binomial;
pub mod compression;
pub mod error;
pub mod family;
pub mod graph;
pub mod kset;
pub mod replay;
pub mod sample;
pub mod search;

pub use binomial::{binomial, star_bound};
pub use compression::{
    build_decomposition, check_proof_invariants, compress_family, shift, CompressionTrace,
    ProofReport, Verdict,
};
pub use error::{Error, Result};
pub use family::{is_intersecting, restrict_pair, star, trace, Family, FamilyJson, Intersecting};
pub use graph::{compatibility_graph, for_each_clique, CompatGraph};
pub use kset::{
    count_k_separated, enumerate_k_separated, is_k_separated, rotate_set, KSet, Params,
};
pub use replay::{replay_induction, Certificate};
pub use sample::{sample_intersecting, Sample, SampleMode};
pub use search::{
    brute_force_max, max_clique, max_intersecting, max_intersecting_with, verify_bound_sweep,
    Method, SearchOptions, SearchResult, SweepReport,
};
