//! Graph families and intersection arrays of distance-regular graphs.
//!
//! Subsets of the ground set `{0..m-1}` are encoded as `u64` bitmasks, and the
//! vertices of a [`LabeledGraph`] are listed in ascending bitmask order so that
//! every construction is reproducible down to the vertex numbering.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{Digraph, INFINITY};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

fn bad(msg: impl Into<String>) -> GeneratorError {
    GeneratorError::BadParameters(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Johnson,
    FoldedJohnson,
}

/// A symmetric graph whose vertices carry `e`-subsets of an `m`-set.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    graph: Digraph,
    family: Family,
    m: usize,
    e: usize,
    labels: Vec<u64>,
    clique: bool,
}

impl LabeledGraph {
    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Ground-set size (`2e` for folded graphs).
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Set when the parameters fall in a range where the family degenerates
    /// to a complete graph.
    pub fn is_clique_boundary(&self) -> bool {
        self.clique
    }

    /// The full ground set as a mask.
    pub fn ground(&self) -> u64 {
        full_mask(self.m)
    }

    /// Maps an `e`-subset to its representative label: the subset itself for
    /// Johnson graphs, and whichever of `x`, `X\x` contains 0 for folded ones.
    pub fn canonical(&self, mask: u64) -> u64 {
        match self.family {
            Family::Johnson => mask,
            Family::FoldedJohnson if mask & 1 == 1 => mask,
            Family::FoldedJohnson => self.ground() & !mask,
        }
    }

    /// Vertex carrying the given subset (after canonicalization).
    pub fn vertex_of(&self, mask: u64) -> Option<usize> {
        let key = self.canonical(mask);
        self.labels.binary_search(&key).ok().or_else(|| self.labels.iter().position(|&l| l == key))
    }

    pub fn name(&self) -> String {
        match self.family {
            Family::Johnson => format!("J({},{})", self.m, self.e),
            Family::FoldedJohnson => format!("folded J({},{})", self.m, self.e),
        }
    }

    /// Side-file text: one `index {a,b,...}` line per vertex.
    pub fn label_lines(&self) -> String {
        let mut out = String::new();
        for (i, &mask) in self.labels.iter().enumerate() {
            let elems: Vec<String> = members(mask).map(|a| a.to_string()).collect();
            let _ = writeln!(out, "{i} {{{}}}", elems.join(","));
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn with_labels_unchecked(&self, labels: Vec<u64>) -> LabeledGraph {
        LabeledGraph { labels, ..self.clone() }
    }
}

pub(crate) fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

pub(crate) fn members(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// All `e`-subsets of `{0..m-1}` in ascending bitmask order.
fn subsets(m: usize, e: usize) -> Vec<u64> {
    if e == 0 {
        return vec![0];
    }
    let limit = full_mask(m);
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << e) - 1;
    loop {
        out.push(x);
        // Gosper's hack: next integer with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 || r > limit {
            break;
        }
        let next = (((r ^ x) >> 2) / c) | r;
        if next > limit {
            break;
        }
        x = next;
    }
    out
}

/// The Johnson graph `J(n,e)`. `e = 1` gives the complete graph `K_n`.
pub fn johnson(n: usize, e: usize) -> Result<LabeledGraph, GeneratorError> {
    if e < 1 {
        return Err(bad(format!("J({n},{e}) needs e >= 1")));
    }
    if n < 2 * e {
        return Err(bad(format!("J({n},{e}) needs n >= 2e")));
    }
    if n > 64 {
        return Err(bad(format!("ground set of size {n} exceeds 64")));
    }
    let labels = subsets(n, e);
    let graph = Digraph::from_fn(labels.len(), |u, v| (labels[u] & labels[v]).count_ones() as usize == e - 1);
    Ok(LabeledGraph { graph, family: Family::Johnson, m: n, e, labels, clique: e == 1 })
}

/// The folded Johnson graph on `2e` points. For `e <= 3` the result is a
/// clique and is flagged as such.
pub fn folded_johnson(e: usize) -> Result<LabeledGraph, GeneratorError> {
    if e < 2 {
        return Err(bad(format!("folded J({},{e}) needs e >= 2", 2 * e)));
    }
    if 2 * e > 64 {
        return Err(bad(format!("ground set of size {} exceeds 64", 2 * e)));
    }
    let labels: Vec<u64> = subsets(2 * e, e).into_iter().filter(|x| x & 1 == 1).collect();
    let graph = Digraph::from_fn(labels.len(), |u, v| {
        let k = (labels[u] & labels[v]).count_ones() as usize;
        k == 1 || k == e - 1
    });
    Ok(LabeledGraph { graph, family: Family::FoldedJohnson, m: 2 * e, e, labels, clique: e <= 3 })
}

/// A cyclic group order with a connection set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleySpec {
    m: usize,
    set: Vec<usize>,
}

impl CayleySpec {
    pub fn new(m: usize, mut set: Vec<usize>) -> Result<Self, GeneratorError> {
        if m < 2 {
            return Err(bad(format!("cyclic group order {m} must be at least 2")));
        }
        if set.is_empty() {
            return Err(bad("connection set is empty"));
        }
        set.sort_unstable();
        for w in set.windows(2) {
            if w[0] == w[1] {
                return Err(bad(format!("connection set repeats {}", w[0])));
            }
        }
        if let Some(&s) = set.iter().find(|&&s| s == 0 || s >= m) {
            return Err(bad(format!("connection element {s} not in 1..{m}")));
        }
        Ok(CayleySpec { m, set })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// True iff the connection set generates the whole group.
    pub fn generates(&self) -> bool {
        self.set.iter().fold(self.m, |g, &s| gcd(g, s)) == 1
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `Cay(Z_m, S)`: arcs `x -> x+s mod m`.
pub fn cayley_cyclic(spec: &CayleySpec) -> Digraph {
    let m = spec.m;
    let mut conn = vec![false; m];
    for &s in &spec.set {
        conn[s] = true;
    }
    Digraph::from_fn(m, |u, v| conn[(v + m - u) % m])
}

pub fn complete(n: usize) -> Digraph {
    Digraph::from_fn(n, |_, _| true)
}

/// `{b_0..b_{d-1}; c_1..c_d}` with the derived `a_0..a_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionArray {
    pub diameter: usize,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub a: Vec<u64>,
}

impl IntersectionArray {
    /// Derives `a_i = b_0 - b_i - c_i` (with `b_d = c_0 = 0`). Fails if the
    /// lists have mismatched lengths, `c_1 != 1`, or some `a_i` would be negative.
    pub fn from_bc(b: Vec<u64>, c: Vec<u64>) -> Result<Self, GeneratorError> {
        let d = c.len();
        if b.len() != d {
            return Err(bad(format!("b has {} entries but c has {d}", b.len())));
        }
        if d > 0 && c[0] != 1 {
            return Err(bad(format!("c_1 = {} but must be 1", c[0])));
        }
        let k = b.first().copied().unwrap_or(0);
        let mut a = Vec::with_capacity(d + 1);
        for i in 0..=d {
            let bi = if i < d { b[i] } else { 0 };
            let ci = if i == 0 { 0 } else { c[i - 1] };
            let ai = k
                .checked_sub(bi + ci)
                .ok_or_else(|| bad(format!("a_{i} = {k} - {bi} - {ci} is negative")))?;
            a.push(ai);
        }
        Ok(IntersectionArray { diameter: d, b, c, a })
    }

    pub fn valency(&self) -> u64 {
        self.b.first().copied().unwrap_or(0)
    }

    /// `a_i`, `c_i` accessors that tolerate out-of-range indices.
    pub fn a_at(&self, i: usize) -> Option<u64> {
        self.a.get(i).copied()
    }

    pub fn c_at(&self, i: usize) -> Option<u64> {
        i.checked_sub(1).and_then(|j| self.c.get(j).copied())
    }
}

/// Why [`intersection_array`] did not produce an array.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrgError {
    #[error("graph is not symmetric")]
    NotSymmetric,
    #[error("graph is not connected")]
    NotConnected,
    #[error(
        "not distance-regular: at distance {distance}, pair ({x},{y}) has {name} = {found} but pair ({x0},{y0}) has {expected}"
    )]
    NotDistanceRegular {
        distance: usize,
        name: &'static str,
        x: usize,
        y: usize,
        found: u64,
        x0: usize,
        y0: usize,
        expected: u64,
    },
}

/// Computes the intersection array by counting, for every ordered pair at
/// distance `i`, the neighbours of `y` at distance `i-1` and `i+1` from `x`.
pub fn intersection_array(g: &Digraph) -> Result<IntersectionArray, DrgError> {
    if !g.is_symmetric() {
        return Err(DrgError::NotSymmetric);
    }
    let dm = g.distance_matrix();
    let diameter = dm.diameter().ok_or(DrgError::NotConnected)? as usize;
    let n = g.n();
    // Per distance: (first witness, b, c)
    type Seen = Option<((usize, usize), u64, u64)>;
    let mut seen: Vec<Seen> = vec![None; diameter + 1];
    for x in 0..n {
        let row = dm.row(x);
        for y in 0..n {
            let i = row[y] as usize;
            let (mut below, mut above) = (0u64, 0u64);
            for z in g.out_neighbours(y) {
                let dz = row[z];
                debug_assert_ne!(dz, INFINITY);
                if dz as usize + 1 == i {
                    below += 1;
                } else if dz as usize == i + 1 {
                    above += 1;
                }
            }
            match seen[i] {
                None => seen[i] = Some(((x, y), above, below)),
                Some(((x0, y0), b, c)) => {
                    let mismatch = if above != b {
                        Some(("b", above, b))
                    } else if below != c {
                        Some(("c", below, c))
                    } else {
                        None
                    };
                    if let Some((name, found, expected)) = mismatch {
                        return Err(DrgError::NotDistanceRegular {
                            distance: i,
                            name,
                            x,
                            y,
                            found,
                            x0,
                            y0,
                            expected,
                        });
                    }
                }
            }
        }
    }
    let b = (0..diameter).map(|i| seen[i].unwrap().1).collect();
    let c = (1..=diameter).map(|i| seen[i].unwrap().2).collect();
    Ok(IntersectionArray::from_bc(b, c).expect("counted arrays are consistent"))
}

/// Parameters of a closed-form array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayKind {
    Johnson { n: usize, e: usize },
    Folded { e: usize },
}

/// Closed-form arrays. Johnson: `b_i = (e-i)(n-e-i)`, `c_i = i^2`, diameter `e`.
/// Folded: `b_i = (e-i)^2`, `c_i = i^2`, diameter `e/2`, except `c_d = 2d^2`
/// when `e` is even. The `a_i` follow from `a_i = b_0 - b_i - c_i`.
pub fn predicted_array(kind: ArrayKind) -> Result<IntersectionArray, GeneratorError> {
    match kind {
        ArrayKind::Johnson { n, e } => {
            if e < 2 || n < 2 * e {
                return Err(bad(format!("predicted J({n},{e}) array needs n >= 2e and e >= 2")));
            }
            let (n, e) = (n as u64, e as u64);
            let b = (0..e).map(|i| (e - i) * (n - e - i)).collect();
            let c = (1..=e).map(|i| i * i).collect();
            IntersectionArray::from_bc(b, c)
        }
        ArrayKind::Folded { e } => {
            if e < 4 {
                return Err(bad(format!("predicted folded J({},{e}) array needs e >= 4", 2 * e)));
            }
            let e = e as u64;
            let d = e / 2;
            let b = (0..d).map(|i| (e - i) * (e - i)).collect();
            let mut c: Vec<u64> = (1..=d).map(|i| i * i).collect();
            if e % 2 == 0 {
                c[d as usize - 1] = 2 * d * d;
            }
            IntersectionArray::from_bc(b, c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &Digraph) -> usize {
        g.arc_count() / 2
    }

    #[test]
    fn johnson_sizes() {
        let j42 = johnson(4, 2).unwrap();
        assert_eq!(j42.graph().n(), 6);
        assert_eq!(edges(j42.graph()), 12);
        assert!((0..6).all(|v| j42.graph().out_degree(v) == 4));
        let j52 = johnson(5, 2).unwrap();
        assert_eq!(j52.graph().n(), 10);
        assert!((0..10).all(|v| j52.graph().out_degree(v) == 6));
        let j31 = johnson(3, 1).unwrap();
        assert_eq!(j31.graph(), &complete(3));
        assert!(j31.is_clique_boundary());
    }

    #[test]
    fn johnson_rejects_bad_parameters() {
        assert!(johnson(3, 2).is_err());
        assert!(johnson(4, 0).is_err());
        assert!(johnson(70, 2).is_err());
    }

    #[test]
    fn labels_ascend_and_lookup() {
        let j = johnson(5, 2).unwrap();
        assert!(j.labels().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(j.labels()[..4], [0b00011, 0b00101, 0b00110, 0b01001]);
        assert_eq!(j.vertex_of(0b00110), Some(2));
        assert_eq!(j.label_lines().lines().next(), Some("0 {0,1}"));
    }

    #[test]
    fn folded_sizes() {
        let f4 = folded_johnson(4).unwrap();
        assert_eq!(f4.graph().n(), 35);
        assert!((0..35).all(|v| f4.graph().out_degree(v) == 16));
        assert!(!f4.is_clique_boundary());
        let f5 = folded_johnson(5).unwrap();
        assert_eq!(f5.graph().n(), 126);
        assert!((0..126).all(|v| f5.graph().out_degree(v) == 25));
        let f3 = folded_johnson(3).unwrap();
        assert_eq!(f3.graph(), &complete(10));
        assert!(f3.is_clique_boundary());
        assert!(folded_johnson(1).is_err());
        // complement lookup
        assert_eq!(f4.vertex_of(0b1111_0000), f4.vertex_of(0b0000_1111));
    }

    #[test]
    fn cayley_digraphs() {
        let d = cayley_cyclic(&CayleySpec::new(6, vec![1, 2]).unwrap());
        assert_eq!(d.arc_count(), 12);
        assert!(!d.has_digon());
        let d = cayley_cyclic(&CayleySpec::new(6, vec![4, 1]).unwrap());
        assert_eq!(d.arc_count(), 12);
        assert!(!d.has_digon());
        let c4 = cayley_cyclic(&CayleySpec::new(4, vec![1, 3]).unwrap());
        assert!(c4.is_symmetric());
        assert_eq!(c4.arc_count(), 8);
        assert!(CayleySpec::new(6, vec![0]).is_err());
        assert!(CayleySpec::new(6, vec![6]).is_err());
        assert!(CayleySpec::new(6, vec![]).is_err());
        assert!(CayleySpec::new(6, vec![1, 1]).is_err());
    }

    #[test]
    fn cayley_generation_matches_strong_connectivity() {
        for m in 2..=12 {
            for mask in 1u32..(1 << (m - 1)) {
                let set: Vec<usize> = (1..m).filter(|s| mask >> (s - 1) & 1 == 1).collect();
                let spec = CayleySpec::new(m, set.clone()).unwrap();
                let d = cayley_cyclic(&spec);
                assert_eq!(spec.generates(), d.is_strongly_connected(), "m={m} S={set:?}");
                assert!((0..m).all(|v| d.out_degree(v) == set.len() && d.in_degree(v) == set.len()));
            }
        }
    }

    #[test]
    fn computed_arrays() {
        let a = intersection_array(johnson(6, 3).unwrap().graph()).unwrap();
        assert_eq!(a.b, vec![9, 4, 1]);
        assert_eq!(a.c, vec![1, 4, 9]);
        let f = intersection_array(folded_johnson(4).unwrap().graph()).unwrap();
        assert_eq!(f.b, vec![16, 9]);
        assert_eq!(f.c, vec![1, 8]);
        let p3 = Digraph::new(3, [(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        assert!(matches!(intersection_array(&p3), Err(DrgError::NotDistanceRegular { .. })));
        let two = Digraph::new(2, []).unwrap();
        assert_eq!(intersection_array(&two), Err(DrgError::NotConnected));
        let arc = Digraph::new(2, [(0, 1)]).unwrap();
        assert_eq!(intersection_array(&arc), Err(DrgError::NotSymmetric));
    }

    #[test]
    fn predicted_arrays() {
        let j = predicted_array(ArrayKind::Johnson { n: 7, e: 3 }).unwrap();
        assert_eq!(j.b, vec![12, 6, 2]);
        assert_eq!(j.c, vec![1, 4, 9]);
        assert_eq!(j.a, vec![0, 5, 6, 3]);

        let f5 = predicted_array(ArrayKind::Folded { e: 5 }).unwrap();
        assert_eq!(f5.b, vec![25, 16]);
        assert_eq!(f5.c, vec![1, 4]);
        // i(2e-2i) gives a_1 = 8; at the diameter b_d = 0 forces a_2 = 25 - 4.
        assert_eq!(f5.a, vec![0, 8, 21]);

        let f4 = predicted_array(ArrayKind::Folded { e: 4 }).unwrap();
        assert_eq!(f4.c, vec![1, 8]);
        assert_eq!(f4.a[2], 8);

        assert!(predicted_array(ArrayKind::Johnson { n: 5, e: 1 }).is_err());
        assert!(predicted_array(ArrayKind::Folded { e: 3 }).is_err());
    }

    #[test]
    fn sum_rule_and_prediction_agree_on_small_families() {
        for n in 4..=10 {
            for e in 2..=n / 2 {
                let g = johnson(n, e).unwrap();
                if g.graph().n() > 500 {
                    continue;
                }
                let a = intersection_array(g.graph()).unwrap();
                assert_eq!(a, predicted_array(ArrayKind::Johnson { n, e }).unwrap(), "J({n},{e})");
                for i in 0..=a.diameter {
                    let bi = a.b.get(i).copied().unwrap_or(0);
                    let ci = a.c_at(i).unwrap_or(0);
                    assert_eq!(a.a[i] + bi + ci, a.valency());
                }
            }
        }
        for e in 4..=5 {
            let a = intersection_array(folded_johnson(e).unwrap().graph()).unwrap();
            assert_eq!(a, predicted_array(ArrayKind::Folded { e }).unwrap());
        }
    }

    #[test]
    fn johnson_is_a_distance_regular_clique_for_e_one() {
        let a = intersection_array(johnson(5, 1).unwrap().graph()).unwrap();
        assert_eq!((a.b, a.c, a.a), (vec![4], vec![1], vec![0, 3]));
    }
}
