//! Compatibility graphs: vertices are k-separated sets, edges join sets that
//! intersect. Intersecting families are exactly the cliques.

use crate::family::Family;
use crate::kset::{enumerate_k_separated, KSet, Params};

/// Fixed-capacity bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut set = Self::new(len);
        for (idx, w) in set.words.iter_mut().enumerate() {
            let remaining = len - idx * 64;
            *w = if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        set
    }

    /// Number of addressable bits.
    pub fn capacity(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / 64] &= !(1u64 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self &= other`.
    #[inline]
    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// `self &= !other`.
    #[inline]
    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// Writes `self & other` into `out`, reusing its buffer.
    #[inline]
    pub fn intersection_into(&self, other: &BitSet, out: &mut BitSet) {
        out.len = self.len;
        out.words.clear();
        out.words
            .extend(self.words.iter().zip(&other.words).map(|(a, b)| a & b));
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(idx, w)| idx * 64 + w.trailing_zeros() as usize)
    }

    /// `true` iff `self` is a subset of `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(idx, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(idx * 64 + bit)
            })
        })
    }
}

/// Intersection graph on a list of k-separated sets.
#[derive(Debug, Clone)]
pub struct CompatGraph {
    params: Params,
    vertices: Vec<KSet>,
    adjacency: Vec<BitSet>,
}

impl CompatGraph {
    /// Graph on `vertices` in the given order; edge iff the two sets intersect.
    pub fn from_sets(params: Params, vertices: Vec<KSet>) -> Self {
        let m = vertices.len();
        let mut adjacency = vec![BitSet::new(m); m];
        for u in 0..m {
            for v in u + 1..m {
                if vertices[u].intersects(&vertices[v]) {
                    adjacency[u].insert(v);
                    adjacency[v].insert(u);
                }
            }
        }
        CompatGraph {
            params,
            vertices,
            adjacency,
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn vertices(&self) -> &[KSet] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbours(&self, v: usize) -> &BitSet {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BitSet::count).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    /// `true` iff every two of `vs` are adjacent.
    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// The family formed by the vertex sets `vs`.
    pub fn family_of(&self, vs: impl IntoIterator<Item = usize>) -> Family {
        Family::new(
            self.params,
            vs.into_iter().map(|v| self.vertices[v].clone()),
        )
        .expect("graph vertices share the graph parameters")
    }
}

/// The compatibility graph of `[n]^(r)_k` in enumeration order.
pub fn compatibility_graph(p: Params) -> CompatGraph {
    CompatGraph::from_sets(p, enumerate_k_separated(p))
}

/// Calls `visit` once for every clique of `g`, including the empty one,
/// with vertex indices in increasing order.
pub fn for_each_clique(g: &CompatGraph, mut visit: impl FnMut(&[usize])) {
    fn grow(
        g: &CompatGraph,
        current: &mut Vec<usize>,
        candidates: BitSet,
        visit: &mut impl FnMut(&[usize]),
    ) {
        visit(current);
        let mut rest = candidates;
        while let Some(v) = rest.first() {
            rest.remove(v);
            let mut next = BitSet::new(rest.capacity());
            rest.intersection_into(g.neighbours(v), &mut next);
            current.push(v);
            grow(g, current, next, visit);
            current.pop();
        }
    }
    let mut current = Vec::new();
    grow(g, &mut current, BitSet::full(g.vertex_count()), &mut visit);
}
