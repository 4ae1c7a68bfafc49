//! Canonical forms of small digraphs.
//!
//! The form is the lexicographically least row-major adjacency encoding over
//! all orderings that keep vertices grouped by their (out, in, digon) degree
//! triple, cells taken in increasing triple order. Orderings are built one
//! position at a time; after each choice every remaining cell is split into
//! non-out-neighbours followed by out-neighbours of the chosen vertex, which
//! fixes that vertex's row and lets whole branches be cut by row comparison.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use super::SearchError;
use crate::digraph::Digraph;

/// Default vertex cap for exact canonicalization.
pub const DEFAULT_CANON_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    n: usize,
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n
    }

    /// The adjacency bits, row-major, packed most significant bit first.
    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Decodes back into the canonically labeled digraph.
    pub fn digraph(&self) -> Digraph {
        Digraph::from_fn(self.n, |u, v| {
            let bit = u * self.n + v;
            self.bytes[bit / 8] >> (7 - bit % 8) & 1 == 1
        })
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for b in &self.bytes {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_size(d: &Digraph, cap: usize) -> Result<(), SearchError> {
    let cap = cap.min(64);
    if d.n() > cap {
        return Err(SearchError::TooLarge { n: d.n(), cap });
    }
    Ok(())
}

/// The ordering realising the canonical form: position `i` holds the original
/// vertex placed `i`-th.
pub fn canonical_labeling(d: &Digraph, cap: usize) -> Result<Vec<usize>, SearchError> {
    check_size(d, cap)?;
    let n = d.n();
    let out: Vec<u64> = (0..n).map(|u| d.row_words(u)[0]).collect();
    let inn: Vec<u64> = (0..n).map(|v| (0..n).filter(|&u| d.has_arc(u, v)).fold(0, |m, u| m | 1 << u)).collect();

    let mut order: Vec<usize> = (0..n).collect();
    let key = |v: usize| (out[v].count_ones(), inn[v].count_ones(), (out[v] & inn[v]).count_ones());
    order.sort_by_key(|&v| (key(v), v));
    let mut cells = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || key(order[i]) != key(order[i - 1]) {
            cells.push(Cell { start, vertices: order[start..i].to_vec() });
            start = i;
        }
    }

    let mut search = Search { n, out: &out, inn: &inn, best: None, rows: Vec::with_capacity(n) };
    search.descend(cells);
    Ok(search.best.expect("at least one ordering").1)
}

pub fn canonical_form(d: &Digraph, cap: usize) -> Result<CanonicalForm, SearchError> {
    let perm = canonical_labeling(d, cap)?;
    let n = d.n();
    let mut bytes = vec![0u8; (n * n).div_ceil(8)];
    for (i, &u) in perm.iter().enumerate() {
        for (j, &v) in perm.iter().enumerate() {
            if d.has_arc(u, v) {
                let bit = i * n + j;
                bytes[bit / 8] |= 0x80 >> (bit % 8);
            }
        }
    }
    Ok(CanonicalForm { n, bytes })
}

/// Isomorphism test by canonical forms, after cheap invariant comparisons.
pub fn are_isomorphic(a: &Digraph, b: &Digraph, cap: usize) -> Result<bool, SearchError> {
    check_size(a, cap)?;
    check_size(b, cap)?;
    if a.n() != b.n() || a.arc_count() != b.arc_count() {
        return Ok(false);
    }
    let degrees = |d: &Digraph| {
        let mut v: Vec<_> = (0..d.n()).map(|u| (d.out_degree(u), d.in_degree(u), d.digon_degree(u))).collect();
        v.sort_unstable();
        v
    };
    if degrees(a) != degrees(b) {
        return Ok(false);
    }
    let distances = |d: &Digraph| {
        let n = d.n();
        let mut v: Vec<_> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| d.two_way_distance(x, y)).collect();
        v.sort_unstable();
        v
    };
    if distances(a) != distances(b) {
        return Ok(false);
    }
    Ok(canonical_form(a, cap)? == canonical_form(b, cap)?)
}

#[derive(Clone)]
struct Cell {
    start: usize,
    vertices: Vec<usize>,
}

struct Search<'a> {
    n: usize,
    out: &'a [u64],
    inn: &'a [u64],
    /// Best rows found so far and the ordering producing them.
    best: Option<(Vec<u64>, Vec<usize>)>,
    /// Rows of the current partial ordering, bit `n-1-j` for position `j`.
    rows: Vec<u64>,
}

impl Search<'_> {
    /// `u` and `v` can be swapped by an automorphism fixing everything else.
    fn twins(&self, u: usize, v: usize) -> bool {
        let others = !(1u64 << u | 1u64 << v);
        self.out[u] & others == self.out[v] & others
            && self.inn[u] & others == self.inn[v] & others
            && (self.out[u] >> v & 1) == (self.out[v] >> u & 1)
    }

    fn descend(&mut self, cells: Vec<Cell>) {
        let depth = self.rows.len();
        if depth == self.n {
            let order: Vec<usize> = cells_order(&cells);
            let better = match &self.best {
                None => true,
                Some((rows, _)) => self.rows < *rows,
            };
            if better {
                self.best = Some((self.rows.clone(), order));
            }
            return;
        }
        let ci = cells.iter().position(|c| c.start <= depth && depth < c.start + c.vertices.len()).expect("cell");
        let choices = cells[ci].vertices.clone();
        for (k, &v) in choices.iter().enumerate() {
            if choices[..k].iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            let next = self.refine(&cells, ci, v);
            let row = self.row_of(&next, v);
            self.rows.push(row);
            let keep = match &self.best {
                None => true,
                Some((best, _)) => match self.rows[..].cmp(&best[..=depth]) {
                    Ordering::Less => {
                        // strictly better prefix: forget the old best
                        self.best = None;
                        true
                    }
                    Ordering::Equal => true,
                    Ordering::Greater => false,
                },
            };
            if keep {
                self.descend(next);
            }
            self.rows.pop();
        }
    }

    /// Places `v` first in cell `ci`, then splits every cell from there on by
    /// out-adjacency from `v`, non-neighbours first.
    fn refine(&self, cells: &[Cell], ci: usize, v: usize) -> Vec<Cell> {
        let mut next = Vec::with_capacity(cells.len() + 2);
        next.extend_from_slice(&cells[..ci]);
        let cell = &cells[ci];
        next.push(Cell { start: cell.start, vertices: vec![v] });
        let rest: Vec<usize> = cell.vertices.iter().copied().filter(|&u| u != v).collect();
        let mut pending = Vec::with_capacity(cells.len() - ci);
        if !rest.is_empty() {
            pending.push(Cell { start: cell.start + 1, vertices: rest });
        }
        pending.extend_from_slice(&cells[ci + 1..]);
        let nb = self.out[v];
        for c in pending {
            if c.vertices.len() == 1 {
                next.push(c);
                continue;
            }
            let (non, adj): (Vec<usize>, Vec<usize>) = c.vertices.iter().partition(|&&u| nb >> u & 1 == 0);
            let mut start = c.start;
            for part in [non, adj] {
                if !part.is_empty() {
                    let len = part.len();
                    next.push(Cell { start, vertices: part });
                    start += len;
                }
            }
        }
        next
    }

    /// Row of `v` under a partition in which every cell is uniform with
    /// respect to out-adjacency from `v`.
    fn row_of(&self, cells: &[Cell], v: usize) -> u64 {
        let mut row = 0u64;
        for c in cells {
            if self.out[v] >> c.vertices[0] & 1 == 1 {
                for p in c.start..c.start + c.vertices.len() {
                    row |= 1 << (self.n - 1 - p);
                }
            }
        }
        row
    }
}

fn cells_order(cells: &[Cell]) -> Vec<usize> {
    let mut order = vec![0; cells.iter().map(|c| c.vertices.len()).sum()];
    for c in cells {
        order[c.start..c.start + c.vertices.len()].copy_from_slice(&c.vertices);
    }
    order
}
