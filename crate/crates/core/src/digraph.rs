//! Dense digraphs with cached directed distances.
//!
//! Vertices are the integers `0..n`. Arcs are stored as one bitset row per
//! vertex, so adjacency tests are a shift and a mask and breadth-first search
//! runs over whole words.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Distance sentinel for unreachable pairs. Strictly greater than any vertex count.
pub const INFINITY: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a digraph needs at least one vertex")]
    Empty,
    #[error("loop arc at vertex {0}")]
    LoopArc(usize),
    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("digraph is not strongly connected")]
    NotStronglyConnected,
    #[error("digraph has no circuit")]
    NoCircuit,
    #[error("graph is not symmetric")]
    NotSymmetric,
    #[error("vertices must be distinct")]
    EqualVertices,
}

/// The pair (distance x→y, distance y→x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoWayDistance {
    pub forward: u32,
    pub backward: u32,
}

impl TwoWayDistance {
    pub const DIAGONAL: TwoWayDistance = TwoWayDistance { forward: 0, backward: 0 };

    pub const fn new(forward: u32, backward: u32) -> Self {
        TwoWayDistance { forward, backward }
    }

    /// The two-way distance of the reversed pair.
    pub const fn swap(self) -> Self {
        TwoWayDistance { forward: self.backward, backward: self.forward }
    }

    pub fn is_finite(self) -> bool {
        self.forward != INFINITY && self.backward != INFINITY
    }
}

impl fmt::Display for TwoWayDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.forward, self.backward)
    }
}

impl Serialize for TwoWayDistance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.forward, self.backward].serialize(s)
    }
}

/// All-pairs directed distances; `INFINITY` marks unreachable pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    pub fn two_way(&self, x: usize, y: usize) -> TwoWayDistance {
        TwoWayDistance::new(self.get(x, y), self.get(y, x))
    }

    pub fn all_finite(&self) -> bool {
        self.dist.iter().all(|&d| d != INFINITY)
    }

    /// Largest finite distance, or `None` when some pair is unreachable.
    pub fn diameter(&self) -> Option<u32> {
        if self.all_finite() {
            self.dist.iter().copied().max()
        } else {
            None
        }
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }
}

/// A finite digraph without loops or multiple arcs.
pub struct Digraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    dist: OnceLock<DistanceMatrix>,
}

impl Clone for Digraph {
    fn clone(&self) -> Self {
        Digraph { n: self.n, words: self.words, rows: self.rows.clone(), dist: self.dist.clone() }
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}

impl Eq for Digraph {}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Digraph { n, words, rows: vec![0; n * words], dist: OnceLock::new() }
    }

    /// Builds a digraph from an explicit arc list. Loops, out-of-range vertices
    /// and repeated arcs are rejected.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut d = Digraph::empty(n);
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopArc(u));
            }
            if d.has_arc(u, v) {
                return Err(GraphError::DuplicateArc(u, v));
            }
            d.set(u, v);
        }
        Ok(d)
    }

    /// Builds a digraph whose arcs are the off-diagonal pairs satisfying `pred`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn from_fn(n: usize, mut pred: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(n > 0, "a digraph needs at least one vertex");
        let mut d = Digraph::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && pred(u, v) {
                    d.set(u, v);
                }
            }
        }
        d
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize) {
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arc test. Panics on out-of-range vertices; see [`Digraph::arc`] for the
    /// checked variant.
    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        self.rows[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn arc(&self, u: usize, v: usize) -> Result<bool, GraphError> {
        for w in [u, v] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        Ok(self.has_arc(u, v))
    }

    /// True when either direction is an arc.
    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) || self.has_arc(v, u)
    }

    #[inline]
    pub(crate) fn row_words(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    pub fn out_neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        bits(self.row_words(u))
    }

    pub fn in_neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_arc(u, v))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.row_words(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_neighbours(v).count()
    }

    /// Number of digons through `u`.
    pub fn digon_degree(&self, u: usize) -> usize {
        self.out_neighbours(u).filter(|&v| self.has_arc(v, u)).count()
    }

    pub fn arc_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbours(u).map(move |v| (u, v)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    pub fn has_digon(&self) -> bool {
        self.arcs().any(|(u, v)| u < v && self.has_arc(v, u))
    }

    /// Edges `{u, v}` with `u < v` of the underlying graph, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The digraph with every arc reversed.
    pub fn reverse(&self) -> Digraph {
        Digraph::from_fn(self.n, |u, v| self.has_arc(v, u))
    }

    /// The symmetrization: an edge wherever at least one arc exists.
    pub fn underlying_graph(&self) -> Digraph {
        Digraph::from_fn(self.n, |u, v| self.adjacent(u, v))
    }

    /// Distances by one breadth-first search per source, computed once.
    pub fn distance_matrix(&self) -> &DistanceMatrix {
        self.dist.get_or_init(|| self.compute_distances())
    }

    fn compute_distances(&self) -> DistanceMatrix {
        let n = self.n;
        let mut dist = vec![INFINITY; n * n];
        let mut queue = VecDeque::with_capacity(n);
        for s in 0..n {
            let row = &mut dist[s * n..(s + 1) * n];
            row[s] = 0;
            queue.clear();
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let du = row[u];
                for v in bits(self.row_words(u)) {
                    if row[v] == INFINITY {
                        row[v] = du + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        DistanceMatrix { n, dist }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.distance_matrix().all_finite()
    }

    pub fn two_way_distance(&self, x: usize, y: usize) -> TwoWayDistance {
        self.distance_matrix().two_way(x, y)
    }

    /// The set of all two-way distances; always contains `(0,0)`.
    pub fn two_way_distance_set(&self) -> Result<BTreeSet<TwoWayDistance>, GraphError> {
        let dm = self.distance_matrix();
        if !dm.all_finite() {
            return Err(GraphError::NotStronglyConnected);
        }
        let mut out = BTreeSet::new();
        for x in 0..self.n {
            for y in 0..self.n {
                out.insert(dm.two_way(x, y));
            }
        }
        Ok(out)
    }

    /// Length of a shortest circuit. A digon is a circuit of length 2.
    pub fn girth(&self) -> Result<u32, GraphError> {
        let dm = self.distance_matrix();
        self.arcs()
            .filter_map(|(u, v)| {
                let back = dm.get(v, u);
                (back != INFINITY).then(|| back + 1)
            })
            .min()
            .ok_or(GraphError::NoCircuit)
    }

    /// Common neighbours of `x` and `z` in a symmetric digraph.
    pub fn common_neighbours(&self, x: usize, z: usize) -> Result<Vec<usize>, GraphError> {
        for w in [x, z] {
            if w >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if x == z {
            return Err(GraphError::EqualVertices);
        }
        if !self.is_symmetric() {
            return Err(GraphError::NotSymmetric);
        }
        Ok(self.common_neighbours_unchecked(x, z))
    }

    /// Vertices adjacent (in either direction) to both `x` and `z`.
    pub(crate) fn common_neighbours_unchecked(&self, x: usize, z: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| y != x && y != z && self.adjacent(x, y) && self.adjacent(z, y)).collect()
    }
}

/// Iterates the set bits of a bitset slice.
pub(crate) fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            }
        })
    })
}
