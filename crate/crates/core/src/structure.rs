//! Subset-level structure of Johnson and folded Johnson graphs.
//!
//! For adjacent `x` and `y = x(a1,b1)` the common neighbourhood splits into
//! `Y1 = {x(a,b1)}` and `Y2 = {x(a1,b)}`. The checks here verify that split and
//! the shape of the distance-2 neighbourhoods on concrete graphs.
//!
//! Folded graphs are handled on representatives: when `|x ∩ y| = 1`, `y` is
//! replaced by its complement before `a1`, `b1` are read off, and every
//! constructed subset is mapped back to its representative. Complementing
//! exchanges the roles of `Y1` and `Y2`, so for such pairs `Y1(y,x)` is
//! compared against `Y2(x,y)` and vice versa.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::Digraph;
use crate::generators::{full_mask, members, Family, LabeledGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("subset {members:#b} is not an {e}-subset of a {m}-set")]
    BadSubset { m: usize, e: usize, members: u64 },
    #[error("alpha is not contained in x")]
    AlphaNotInX,
    #[error("beta meets x or leaves the ground set")]
    BetaIntersectsX,
    #[error("alpha and beta differ in size")]
    SizeMismatch,
    #[error("subsets live in different ground sets")]
    GroundMismatch,
    #[error("vertices are not adjacent")]
    NotAdjacent,
    #[error("graph diameter is below 2")]
    DiameterTooSmall,
    #[error("graph is not connected")]
    NotConnected,
}

/// An `e`-subset of `{0..m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetVertex {
    m: usize,
    members: u64,
}

impl SubsetVertex {
    pub fn new(m: usize, members: u64) -> Result<Self, StructureError> {
        if m > 64 || members & !full_mask(m) != 0 {
            return Err(StructureError::BadSubset { m, e: members.count_ones() as usize, members });
        }
        Ok(SubsetVertex { m, members })
    }

    pub fn from_elements(m: usize, elems: &[usize]) -> Result<Self, StructureError> {
        let mut mask = 0u64;
        for &a in elems {
            if a >= m.min(64) {
                return Err(StructureError::BadSubset { m, e: elems.len(), members: mask });
            }
            mask |= 1 << a;
        }
        Self::new(m, mask)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn members(&self) -> u64 {
        self.members
    }

    pub fn size(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn elements(&self) -> Vec<usize> {
        members(self.members).collect()
    }

    fn complement(&self) -> u64 {
        full_mask(self.m) & !self.members
    }
}

/// `x(alpha,beta) = (x \ alpha) ∪ beta`.
pub fn subset_swap(x: SubsetVertex, alpha: u64, beta: u64) -> Result<SubsetVertex, StructureError> {
    if alpha & !x.members != 0 {
        return Err(StructureError::AlphaNotInX);
    }
    if beta & !x.complement() != 0 {
        return Err(StructureError::BetaIntersectsX);
    }
    if alpha.count_ones() != beta.count_ones() {
        return Err(StructureError::SizeMismatch);
    }
    Ok(SubsetVertex { m: x.m, members: (x.members & !alpha) | beta })
}

/// The split `(Y1, Y2)` of the common neighbourhood of Johnson-adjacent
/// subsets, each in ascending bitmask order.
pub fn y_sets(x: SubsetVertex, y: SubsetVertex) -> Result<(Vec<SubsetVertex>, Vec<SubsetVertex>), StructureError> {
    if x.m != y.m || x.size() != y.size() {
        return Err(StructureError::GroundMismatch);
    }
    let e = x.size();
    if e == 0 || (x.members & y.members).count_ones() as usize != e - 1 {
        return Err(StructureError::NotAdjacent);
    }
    let a1 = x.members & !y.members;
    let b1 = y.members & !x.members;
    let y1 = members(x.members & !a1)
        .map(|a| subset_swap(x, 1 << a, b1).expect("valid swap"))
        .collect();
    let y2 = members(x.complement() & !b1)
        .map(|b| subset_swap(x, a1, 1 << b).expect("valid swap"))
        .collect();
    Ok((y1, y2))
}

/// Whether `y` must be complemented to become Johnson-adjacent to `x`.
fn complemented(g: &LabeledGraph, x: usize, y: usize) -> bool {
    g.family() == Family::FoldedJohnson && g.e() > 2 && (g.label(x) & g.label(y)).count_ones() == 1
}

/// Y-sets for graph vertices `x`, `y`, as vertex indices.
fn y_vertex_sets(g: &LabeledGraph, x: usize, y: usize) -> Result<[BTreeSet<usize>; 2], StructureError> {
    let m = g.m();
    let xs = SubsetVertex::new(m, g.label(x))?;
    let mut ys = SubsetVertex::new(m, g.label(y))?;
    if complemented(g, x, y) {
        ys = SubsetVertex::new(m, ys.complement())?;
    }
    let (y1, y2) = y_sets(xs, ys)?;
    let index = |s: Vec<SubsetVertex>| -> Result<BTreeSet<usize>, StructureError> {
        s.into_iter().map(|v| g.vertex_of(v.members).ok_or(StructureError::NotAdjacent)).collect()
    };
    Ok([index(y1)?, index(y2)?])
}

/// One pass/fail flag with the first offending vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Check {
    pub ok: bool,
    pub witness: Option<(usize, usize)>,
}

impl Check {
    const PASS: Check = Check { ok: true, witness: None };

    fn fail(a: usize, b: usize) -> Check {
        Check { ok: false, witness: Some((a, b)) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NeighbourhoodReport {
    pub x: usize,
    pub y: usize,
    /// `Y1 ∪ Y2` is the common neighbourhood with sizes `e-1` and `m-e-1`;
    /// distances are 1 within each part and 2 across.
    pub partition_and_distances: Check,
    /// `Yi(x,y) = Yi(y,x)`.
    pub swap_symmetric: Check,
    /// For `z` in `Yi(x,y)`: `Yi(x,y) ∪ {y} = Yi(x,z) ∪ {z}` and the other part
    /// misses both parts of `(x,z)`.
    pub exchange: Check,
}

impl NeighbourhoodReport {
    pub fn all_pass(&self) -> bool {
        self.partition_and_distances.ok && self.swap_symmetric.ok && self.exchange.ok
    }
}

pub fn verify_neighbourhood_structure(
    g: &LabeledGraph,
    x: usize,
    y: usize,
) -> Result<NeighbourhoodReport, StructureError> {
    let graph = g.graph();
    if x >= graph.n() || y >= graph.n() || !graph.adjacent(x, y) {
        return Err(StructureError::NotAdjacent);
    }
    let dm = graph.distance_matrix();
    let Ok([y1, y2]) = y_vertex_sets(g, x, y) else {
        // labels disagree with adjacency
        let f = Check::fail(x, y);
        return Ok(NeighbourhoodReport { x, y, partition_and_distances: f, swap_symmetric: f, exchange: f });
    };

    let partition_and_distances = (|| {
        let (m, e) = (g.m(), g.e());
        if y1.len() != e - 1 || y2.len() != m - e - 1 || !y1.is_disjoint(&y2) {
            return Check::fail(x, y);
        }
        let union: BTreeSet<usize> = y1.union(&y2).copied().collect();
        let common: BTreeSet<usize> = graph.common_neighbours_unchecked(x, y).into_iter().collect();
        if let Some(&w) = union.symmetric_difference(&common).next() {
            return Check::fail(x, w);
        }
        for part in [&y1, &y2] {
            for &a in part {
                for &b in part {
                    if a != b && dm.get(a, b) != 1 {
                        return Check::fail(a, b);
                    }
                }
            }
        }
        for &a in &y1 {
            for &b in &y2 {
                if dm.get(a, b) != 2 {
                    return Check::fail(a, b);
                }
            }
        }
        Check::PASS
    })();

    let swap_symmetric = match y_vertex_sets(g, y, x) {
        Ok([r1, r2]) if complemented(g, x, y) && r1 == y2 && r2 == y1 => Check::PASS,
        Ok([r1, r2]) if !complemented(g, x, y) && r1 == y1 && r2 == y2 => Check::PASS,
        _ => Check::fail(y, x),
    };

    let exchange = (|| {
        let parts = [&y1, &y2];
        for i in 0..2 {
            for &z in parts[i] {
                let Ok(zs) = y_vertex_sets(g, x, z) else {
                    return Check::fail(x, z);
                };
                let mut lhs = parts[i].clone();
                lhs.insert(y);
                let mut rhs = zs[i].clone();
                rhs.insert(z);
                if lhs != rhs {
                    return Check::fail(x, z);
                }
                let other = parts[1 - i];
                if zs.iter().any(|h| !other.is_disjoint(h)) {
                    return Check::fail(x, z);
                }
            }
        }
        Check::PASS
    })();

    Ok(NeighbourhoodReport { x, y, partition_and_distances, swap_symmetric, exchange })
}

/// Runs [`verify_neighbourhood_structure`] over every edge `x < y` (or an
/// evenly spaced sample of `sample` edges) and returns the reports that fail,
/// plus the number of edges checked.
pub fn sweep_neighbourhoods(
    g: &LabeledGraph,
    sample: Option<usize>,
) -> Result<(usize, Vec<NeighbourhoodReport>), StructureError> {
    use rayon::prelude::*;
    let edges = g.graph().edges();
    let chosen: Vec<(usize, usize)> = match sample {
        Some(k) if k < edges.len() && k > 0 => {
            let step = edges.len() / k;
            edges.iter().step_by(step).take(k).copied().collect()
        }
        _ => edges,
    };
    let reports: Result<Vec<_>, _> =
        chosen.par_iter().map(|&(x, y)| verify_neighbourhood_structure(g, x, y)).collect();
    let failures = reports?.into_iter().filter(|r| !r.all_pass()).collect();
    Ok((chosen.len(), failures))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuViolation {
    pub x: usize,
    pub z: usize,
    pub mu_size: usize,
    pub reason: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuGraphReport {
    pub pairs_checked: usize,
    pub pass: bool,
    pub violation: Option<MuViolation>,
}

/// Checks that every distance-2 pair has exactly four common neighbours
/// inducing, together with the pair, an octahedron, and that the common
/// neighbours pair off at distance 2 with the expected second common
/// neighbourhoods.
pub fn mu_graph_property(g: &Digraph) -> Result<MuGraphReport, StructureError> {
    let dm = g.distance_matrix();
    let diameter = dm.diameter().ok_or(StructureError::NotConnected)?;
    if diameter < 2 {
        return Err(StructureError::DiameterTooSmall);
    }
    let n = g.n();
    let mut pairs_checked = 0;
    for x in 0..n {
        for z in x + 1..n {
            if dm.get(x, z) != 2 {
                continue;
            }
            pairs_checked += 1;
            if let Some(violation) = mu_violation(g, x, z) {
                return Ok(MuGraphReport { pairs_checked, pass: false, violation: Some(violation) });
            }
        }
    }
    Ok(MuGraphReport { pairs_checked, pass: true, violation: None })
}

fn mu_violation(g: &Digraph, x: usize, z: usize) -> Option<MuViolation> {
    let common = g.common_neighbours_unchecked(x, z);
    let fail = |reason| Some(MuViolation { x, z, mu_size: common.len(), reason });
    if common.len() != 4 {
        return fail("common neighbourhood size is not 4");
    }
    // Six vertices, 4-regular: the complement is a perfect matching.
    let mut six = common.clone();
    six.extend([x, z]);
    for &u in &six {
        if six.iter().filter(|&&v| v != u && g.has_arc(u, v)).count() != 4 {
            return fail("induced subgraph is not an octahedron");
        }
    }
    for &y1 in &common {
        let partners: Vec<usize> = common.iter().copied().filter(|&y| y != y1 && !g.has_arc(y1, y)).collect();
        let [y2] = partners[..] else {
            return fail("common neighbour without a unique antipode");
        };
        let mut expected: Vec<usize> = common.iter().copied().filter(|&y| y != y1 && y != y2).collect();
        expected.extend([x, z]);
        expected.sort_unstable();
        if g.common_neighbours_unchecked(y1, y2) != expected {
            return fail("antipodal pair has the wrong common neighbours");
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{folded_johnson, johnson};

    fn sv(m: usize, elems: &[usize]) -> SubsetVertex {
        SubsetVertex::from_elements(m, elems).unwrap()
    }

    #[test]
    fn swaps() {
        let x = sv(4, &[1, 2]);
        assert_eq!(subset_swap(x, 0b0010, 0b1000).unwrap(), sv(4, &[2, 3]));
        assert_eq!(subset_swap(x, 0, 0).unwrap(), x);
        let x = sv(7, &[1, 2, 3, 4]);
        assert_eq!(subset_swap(x, 0b0110, 0b110_0000).unwrap(), sv(7, &[3, 4, 5, 6]));
        assert_eq!(subset_swap(x, 0b1, 0b10_0000), Err(StructureError::AlphaNotInX));
        assert_eq!(subset_swap(x, 0b10, 0b100), Err(StructureError::BetaIntersectsX));
        assert_eq!(subset_swap(x, 0b10, 0b1_0000_0000), Err(StructureError::BetaIntersectsX));
        assert_eq!(subset_swap(x, 0b110, 0b10_0000), Err(StructureError::SizeMismatch));
    }

    #[test]
    fn y_set_examples() {
        // {1,2},{1,3} on the ground set {0..3}
        let (y1, y2) = y_sets(sv(4, &[0, 1]), sv(4, &[0, 2])).unwrap();
        assert_eq!(y1, vec![sv(4, &[1, 2])]);
        assert_eq!(y2, vec![sv(4, &[0, 3])]);
        let (y1, y2) = y_sets(sv(6, &[0, 1, 2]), sv(6, &[0, 1, 3])).unwrap();
        assert_eq!((y1.len(), y2.len()), (2, 2));
        assert_eq!(y_sets(sv(6, &[0, 1, 2]), sv(6, &[0, 4, 3])), Err(StructureError::NotAdjacent));
    }

    #[test]
    fn neighbourhood_structure_on_johnson_graphs() {
        for g in [johnson(6, 3).unwrap(), johnson(6, 2).unwrap(), folded_johnson(5).unwrap()] {
            let (checked, failures) = sweep_neighbourhoods(&g, Some(40)).unwrap();
            assert!(checked > 0);
            assert!(failures.is_empty(), "{}: {:?}", g.name(), failures.first());
        }
    }

    #[test]
    fn mislabeled_graph_fails_distance_check() {
        let g = johnson(5, 2).unwrap();
        let mut labels = g.labels().to_vec();
        labels.swap(0, 9);
        let bad = g.with_labels_unchecked(labels);
        let (_, failures) = sweep_neighbourhoods(&bad, None).unwrap();
        assert!(!failures.is_empty());
        assert!(failures.iter().any(|r| !r.partition_and_distances.ok));
    }

    #[test]
    fn not_adjacent_is_rejected() {
        let g = johnson(5, 2).unwrap();
        let (x, z) = (0, g.vertex_of(0b11000).unwrap());
        assert_eq!(verify_neighbourhood_structure(&g, x, z), Err(StructureError::NotAdjacent));
    }

    #[test]
    fn mu_graphs() {
        let r = mu_graph_property(johnson(6, 2).unwrap().graph()).unwrap();
        assert!(r.pass && r.pairs_checked > 0);
        assert!(mu_graph_property(folded_johnson(5).unwrap().graph()).unwrap().pass);
        let r = mu_graph_property(folded_johnson(4).unwrap().graph()).unwrap();
        assert!(!r.pass);
        assert_eq!(r.violation.unwrap().mu_size, 8);
        assert_eq!(
            mu_graph_property(johnson(5, 1).unwrap().graph()),
            Err(StructureError::DiameterTooSmall)
        );
    }
}
