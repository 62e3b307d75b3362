//! Exact maximum intersecting families.
//!
//! [`max_clique`] is a bitset branch-and-bound in the MCQ/BBMC style: vertices
//! are relabelled in degeneracy order, every node colours its candidate set
//! greedily and branches on the highest colour classes first, pruning when
//! `|clique| + colour <= best`. [`brute_force_max`] is an unpruned subset
//! scan that shares no code with it and serves as the oracle.
//!
//! For `k = 0` the clique search by default runs on the [`shifted_core`]
//! only. Plain colouring bounds are hopeless there (colour classes of pairwise
//! disjoint r-sets hold at most `n / r` sets), while the classical shifting
//! argument guarantees a maximum family inside the core.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::binomial::{binomial, star_bound};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::{compatibility_graph, BitSet, CompatGraph};
use crate::kset::{enumerate_k_separated, KSet, Params};

/// Default vertex limit for the clique method.
pub const DEFAULT_VERTEX_CAP: usize = 20_000;
/// Default vertex limit for the subset scan.
pub const DEFAULT_BRUTE_CAP: usize = 24;
/// Hard ceiling for the subset scan; `2^30` subsets is already far past desk scale.
pub const MAX_BRUTE_CAP: usize = 30;

/// Result of [`max_clique`], in the graph's own vertex numbering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub size: usize,
    pub vertices: Vec<usize>,
    pub nodes: u64,
}

/// Vertices ordered by smallest-last removal, reversed: the densest core first.
fn degeneracy_order(g: &CompatGraph) -> Vec<usize> {
    let m = g.vertex_count();
    let mut degree: Vec<usize> = (0..m).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; m];
    let mut order = Vec::with_capacity(m);
    for _ in 0..m {
        // Lowest index wins ties, keeping the order deterministic.
        let v = (0..m)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("a vertex remains");
        removed[v] = true;
        order.push(v);
        for u in g.neighbours(v).iter() {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order.reverse();
    order
}

struct Solver {
    adj: Vec<BitSet>,
    best: usize,
    best_set: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
}

impl Solver {
    /// Greedy sequential colouring of `candidates`; colours are non-decreasing along the output.
    fn colour(&self, candidates: &BitSet, order: &mut Vec<usize>, colours: &mut Vec<usize>) {
        order.clear();
        colours.clear();
        let mut uncoloured = candidates.clone();
        let mut class = 0;
        while !uncoloured.is_empty() {
            class += 1;
            let mut open = uncoloured.clone();
            while let Some(v) = open.first() {
                open.remove(v);
                uncoloured.remove(v);
                open.difference_with(&self.adj[v]);
                order.push(v);
                colours.push(class);
            }
        }
    }

    fn expand(&mut self, candidates: BitSet) {
        self.nodes += 1;
        let mut order = Vec::new();
        let mut colours = Vec::new();
        self.colour(&candidates, &mut order, &mut colours);
        let mut remaining = candidates;
        let mut next = BitSet::new(remaining.capacity());
        for idx in (0..order.len()).rev() {
            if self.current.len() + colours[idx] <= self.best {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            remaining.intersection_into(&self.adj[v], &mut next);
            if next.is_empty() {
                if self.current.len() > self.best {
                    self.best = self.current.len();
                    self.best_set = self.current.clone();
                }
            } else {
                self.expand(next.clone());
            }
            self.current.pop();
            remaining.remove(v);
        }
    }
}

/// Exact maximum clique of `g`.
///
/// `lower_bound_hint` is the size of a clique known to exist; only strictly
/// better cliques than `hint - 1` are explored. A wrong hint costs a second
/// pass, never a wrong answer.
pub fn max_clique(g: &CompatGraph, lower_bound_hint: usize) -> Clique {
    let m = g.vertex_count();
    if m == 0 {
        return Clique {
            size: 0,
            vertices: Vec::new(),
            nodes: 0,
        };
    }
    let order = degeneracy_order(g);
    let mut position = vec![0; m];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let adj: Vec<BitSet> = order
        .iter()
        .map(|&old| {
            let mut row = BitSet::new(m);
            for u in g.neighbours(old).iter() {
                row.insert(position[u]);
            }
            row
        })
        .collect();

    let mut solver = Solver {
        adj,
        best: lower_bound_hint.clamp(1, m) - 1,
        best_set: Vec::new(),
        current: Vec::new(),
        nodes: 0,
    };
    solver.expand(BitSet::full(m));
    if solver.best_set.is_empty() {
        // The hint was not attainable; search again from scratch.
        let spent = solver.nodes;
        solver.best = 0;
        solver.expand(BitSet::full(m));
        solver.nodes += spent;
    }
    let mut vertices: Vec<usize> = solver.best_set.iter().map(|&v| order[v]).collect();
    vertices.sort_unstable();
    Clique {
        size: vertices.len(),
        vertices,
        nodes: solver.nodes,
    }
}

/// Outcome of the subset scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForce {
    pub optimum: usize,
    pub witness: Family,
    pub subsets_scanned: u64,
}

/// Scans every subset of `[n]^(r)_k` for the largest intersecting one.
///
/// Refuses instances with more than `cap` sets (`cap` itself is limited to
/// [`MAX_BRUTE_CAP`]).
pub fn brute_force_search(p: Params, cap: usize) -> Result<BruteForce> {
    let sets = enumerate_k_separated(p);
    let m = sets.len();
    if m > cap.min(MAX_BRUTE_CAP) {
        return Err(Error::Capacity {
            vertices: m,
            cap: cap.min(MAX_BRUTE_CAP),
        });
    }
    let masks: Vec<u64> = sets.iter().map(|s| s.mask()).collect();
    // meets[v]: bitmask over indices of sets that share an element with set v.
    let meets: Vec<u32> = masks
        .iter()
        .map(|&a| {
            masks
                .iter()
                .enumerate()
                .filter(|&(_, &b)| a & b != 0)
                .fold(0u32, |acc, (u, _)| acc | 1 << u)
        })
        .collect();

    let total = 1usize << m;
    // good[s]: subset s is pairwise intersecting.
    let mut good = vec![false; total];
    good[0] = true;
    let (mut best, mut best_subset) = (0u32, 0usize);
    for s in 1..total {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        if good[rest] && (rest as u32) & !meets[low] == 0 {
            good[s] = true;
            let size = s.count_ones();
            if size > best {
                best = size;
                best_subset = s;
            }
        }
    }
    let witness = Family::new(
        p,
        (0..m)
            .filter(|&v| best_subset >> v & 1 == 1)
            .map(|v| sets[v].clone()),
    )?;
    Ok(BruteForce {
        optimum: best as usize,
        witness,
        subsets_scanned: total as u64,
    })
}

/// Size of the largest intersecting subfamily of `[n]^(r)_k` by subset scan.
pub fn brute_force_max(p: Params, cap: usize) -> Result<usize> {
    brute_force_search(p, cap).map(|b| b.optimum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Clique,
    Bruteforce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub vertex_cap: usize,
    pub brute_cap: usize,
    /// Restrict the `k = 0` clique search to the [`shifted_core`].
    pub shifted_core: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            vertex_cap: DEFAULT_VERTEX_CAP,
            brute_cap: DEFAULT_BRUTE_CAP,
            shifted_core: true,
        }
    }
}

/// Optimum and witness for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub params: Params,
    pub method: Method,
    /// `|[n]^(r)_k|`.
    pub family_size: usize,
    pub optimum: usize,
    pub witness: Family,
    pub predicted: u64,
    pub matches: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// The r-sets `a_1 < ... < a_r` of `[n]` (with `k = 0`) such that
/// `a_i <= 2i - 1` for some `i`.
///
/// These are exactly the sets whose down-closure in the componentwise order
/// is intersecting: if `a_i >= 2i` for every `i`, the sets of odd and of even
/// numbers in `[2r]` are disjoint and both lie below, while two disjoint sets
/// below `a` would need `2i` distinct values up to `a_i`. Shifting
/// (`j -> i` for `i < j`) keeps a family intersecting and its size unchanged,
/// and a fully shifted family is a down-set, so some maximum intersecting
/// family lies inside this core and the core has the same clique number as
/// the whole graph.
pub fn shifted_core(p: Params) -> Vec<KSet> {
    debug_assert_eq!(p.k, 0, "the shifted core is defined for k = 0");
    enumerate_k_separated(p)
        .into_iter()
        .filter(|s| s.elems().iter().zip(1u32..).any(|(&a, i)| a < 2 * i))
        .collect()
}

/// The predicted maximum: `binom(n-kr-1, r-1)` for `k >= 1`,
/// `binom(n-1, r-1)` for `k = 0` and `n >= 2r`, and `binom(n, r)` for `k = 0`
/// and `n < 2r`, where any two r-sets meet.
pub fn predicted_optimum(p: Params) -> Result<u64> {
    let (n, r) = (p.n as i64, p.r as i64);
    if p.k >= 1 {
        star_bound(p.n, p.k, p.r)
    } else if n >= 2 * r {
        binomial(n - 1, r - 1)
    } else {
        binomial(n, r)
    }
}

pub fn max_intersecting(p: Params, method: Method) -> Result<SearchResult> {
    max_intersecting_with(p, method, &SearchOptions::default())
}

/// Largest intersecting subfamily of `[n]^(r)_k`.
pub fn max_intersecting_with(
    p: Params,
    method: Method,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if p.r == 0 {
        return Err(Error::InvalidParams("set size r must be at least 1".into()));
    }
    let predicted = predicted_optimum(p)?;
    let start = Instant::now();
    let (family_size, optimum, witness, nodes) = match method {
        Method::Clique => {
            let family_size = crate::kset::count_k_separated(p)? as usize;
            if family_size > opts.vertex_cap {
                return Err(Error::Capacity {
                    vertices: family_size,
                    cap: opts.vertex_cap,
                });
            }
            let g = if p.k == 0 && opts.shifted_core {
                CompatGraph::from_sets(p, shifted_core(p))
            } else {
                compatibility_graph(p)
            };
            let hint = if p.is_nonempty() {
                star_bound(p.n, p.k, p.r)? as usize
            } else {
                0
            };
            let clique = max_clique(&g, hint);
            let witness = g.family_of(clique.vertices.iter().copied());
            (family_size, clique.size, witness, clique.nodes)
        }
        Method::Bruteforce => {
            let b = brute_force_search(p, opts.brute_cap)?;
            let family_size = crate::kset::count_k_separated(p)? as usize;
            (family_size, b.optimum, b.witness, b.subsets_scanned)
        }
    };
    Ok(SearchResult {
        params: p,
        method,
        family_size,
        optimum,
        witness,
        predicted,
        matches: optimum as u64 == predicted,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    })
}

/// One row of a bound sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub params: Params,
    pub outcome: std::result::Result<SearchResult, Error>,
}

impl SweepRow {
    pub fn matches(&self) -> bool {
        matches!(&self.outcome, Ok(res) if res.matches)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(SweepRow::matches)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|row| !row.matches())
    }
}

/// Solves every instance of `grid` in order; per-row errors are recorded and
/// the sweep carries on.
pub fn verify_bound_sweep(grid: &[Params], method: Method, opts: &SearchOptions) -> SweepReport {
    let rows = grid
        .iter()
        .map(|&params| SweepRow {
            params,
            outcome: max_intersecting_with(params, method, opts),
        })
        .collect();
    SweepReport { rows }
}

/// Ranges describing a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_min: u32,
    pub n_max: u32,
    pub k_min: u32,
    pub k_max: u32,
    pub r_min: u32,
    pub r_max: u32,
}

/// Instances ordered by `k`, then `r`, then `n`. For each `(k, r)` the circle
/// length starts at `(k+1) r`, or at `2r` when `k = 0`.
pub fn bound_grid(spec: GridSpec) -> Result<Vec<Params>> {
    let mut grid = Vec::new();
    for k in spec.k_min..=spec.k_max {
        for r in spec.r_min.max(1)..=spec.r_max {
            let threshold = if k == 0 { 2 * r } else { (k + 1) * r };
            for n in spec.n_min.max(threshold).max(1)..=spec.n_max {
                grid.push(Params::new(n, k, r)?);
            }
        }
    }
    Ok(grid)
}
