//! Relation partitions, association-scheme validation and intersection numbers.
//!
//! Classes are indexed by position in [`RelationPartition::classes`]: the
//! diagonal label first, every other label in lexicographic order. Intersection
//! numbers follow the convention `p[i][j][l] = |{z : (x,z) in R_i, (z,y) in R_j}|`
//! for any `(x,y)` in `R_l`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, TwoWayDistance};

/// A labelling of all ordered vertex pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPartition {
    n: usize,
    classes: Vec<TwoWayDistance>,
    labels: Vec<u32>,
}

impl RelationPartition {
    /// Builds a partition from an arbitrary labelling function. The label of
    /// pair `(0,0)` is placed first.
    pub fn from_labels(n: usize, label: impl Fn(usize, usize) -> TwoWayDistance) -> Self {
        let raw: Vec<TwoWayDistance> = (0..n * n).map(|k| label(k / n, k % n)).collect();
        let mut classes = raw.clone();
        classes.sort_unstable();
        classes.dedup();
        if let Some(&diag) = raw.first() {
            let pos = classes.iter().position(|&c| c == diag).unwrap();
            classes.remove(pos);
            classes.insert(0, diag);
        }
        let labels = raw.iter().map(|t| classes.iter().position(|c| c == t).unwrap() as u32).collect();
        RelationPartition { n, classes, labels }
    }

    /// The partition by two-way distance.
    pub fn attached(d: &Digraph) -> Result<Self, GraphError> {
        let dm = d.distance_matrix();
        if !dm.all_finite() {
            return Err(GraphError::NotStronglyConnected);
        }
        Ok(Self::from_labels(d.n(), |x, y| dm.two_way(x, y)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[TwoWayDistance] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.labels[x * self.n + y] as usize
    }

    pub fn label(&self, x: usize, y: usize) -> TwoWayDistance {
        self.classes[self.class_of(x, y)]
    }

    pub fn index_of(&self, label: TwoWayDistance) -> Option<usize> {
        self.classes.iter().position(|&c| c == label)
    }

    /// `R_i(x)`.
    pub fn neighbours(&self, x: usize, class: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&y| self.class_of(x, y) == class)
    }
}

/// The first axiom found to fail, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("diagonal pair ({v},{v}) is not in the diagonal class")]
    DiagonalSplit { v: usize },
    #[error("off-diagonal pair ({x},{y}) is in the diagonal class")]
    DiagonalLeak { x: usize, y: usize },
    #[error("class {class}: transposes of {pair_a:?} and {pair_b:?} lie in different classes")]
    NotTransposeClosed { class: TwoWayDistance, pair_a: (usize, usize), pair_b: (usize, usize) },
    #[error(
        "p[{i}][{j}] over class {l} is not constant: {count_a} at {pair_a:?} but {count_b} at {pair_b:?}"
    )]
    NonConstant {
        i: TwoWayDistance,
        j: TwoWayDistance,
        l: TwoWayDistance,
        pair_a: (usize, usize),
        count_a: u32,
        pair_b: (usize, usize),
        count_b: u32,
    },
}

impl AxiomViolation {
    /// Short reason tag, used for rejection statistics.
    pub fn kind(&self) -> &'static str {
        match self {
            AxiomViolation::DiagonalSplit { .. } | AxiomViolation::DiagonalLeak { .. } => "diagonal",
            AxiomViolation::NotTransposeClosed { .. } => "transpose",
            AxiomViolation::NonConstant { l, .. } if *l == TwoWayDistance::DIAGONAL => "valency",
            AxiomViolation::NonConstant { .. } => "intersection-number",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("unknown class {0}")]
    UnknownClass(TwoWayDistance),
}

/// A validated association scheme with its full intersection tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme {
    partition: RelationPartition,
    dual: Vec<usize>,
    valency: Vec<u64>,
    tensor: Vec<u32>,
}

/// Checks the four axioms by brute-force counting, stopping at the first
/// failure. Valencies are checked before the other intersection numbers since
/// they fail most often.
pub fn verify_association_scheme(p: &RelationPartition) -> Result<AssociationScheme, AxiomViolation> {
    let n = p.n;
    let c = p.classes.len();

    for v in 0..n {
        if p.class_of(v, v) != 0 {
            return Err(AxiomViolation::DiagonalSplit { v });
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && p.class_of(x, y) == 0 {
                return Err(AxiomViolation::DiagonalLeak { x, y });
            }
        }
    }

    let mut dual: Vec<Option<(usize, (usize, usize))>> = vec![None; c];
    for x in 0..n {
        for y in 0..n {
            let i = p.class_of(x, y);
            let t = p.class_of(y, x);
            match dual[i] {
                None => dual[i] = Some((t, (x, y))),
                Some((t0, first)) if t0 != t => {
                    return Err(AxiomViolation::NotTransposeClosed {
                        class: p.classes[i],
                        pair_a: first,
                        pair_b: (x, y),
                    })
                }
                Some(_) => {}
            }
        }
    }
    let dual: Vec<usize> = dual.into_iter().map(|d| d.expect("every class is non-empty").0).collect();

    let mut tensor = vec![0u32; c * c * c];
    let mut witness: Vec<Option<(usize, usize)>> = vec![None; c];
    let mut counts = vec![0u32; c * c];
    let diagonal = (0..n).map(|v| (v, v));
    let off = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)));
    for (x, y) in diagonal.chain(off) {
        counts.iter_mut().for_each(|k| *k = 0);
        for z in 0..n {
            counts[p.class_of(x, z) * c + p.class_of(z, y)] += 1;
        }
        let l = p.class_of(x, y);
        match witness[l] {
            None => {
                witness[l] = Some((x, y));
                for ij in 0..c * c {
                    tensor[ij * c + l] = counts[ij];
                }
            }
            Some(first) => {
                if let Some(ij) = (0..c * c).find(|&ij| tensor[ij * c + l] != counts[ij]) {
                    return Err(AxiomViolation::NonConstant {
                        i: p.classes[ij / c],
                        j: p.classes[ij % c],
                        l: p.classes[l],
                        pair_a: first,
                        count_a: tensor[ij * c + l],
                        pair_b: (x, y),
                        count_b: counts[ij],
                    });
                }
            }
        }
    }

    let valency = (0..c).map(|i| tensor[(i * c + dual[i]) * c] as u64).collect();
    Ok(AssociationScheme { partition: p.clone(), dual, valency, tensor })
}

/// Per-identity outcome: `None` when the identity holds, otherwise the first
/// failing index tuple.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct IdentityReport {
    /// `k_i k_j = sum_h p_{i,j}^h k_h`, indices `[i, j]`.
    pub valency_product: Option<Vec<usize>>,
    /// `p_{i,j}^l k_l = p_{l,j*}^i k_i = p_{i*,l}^j k_j`, indices `[i, j, l]`.
    pub triple_balance: Option<Vec<usize>>,
    /// `sum_r p_{i,l}^r p_{m,r}^j = sum_t p_{m,i}^t p_{t,l}^j`, indices `[i, l, m, j]`.
    pub associativity: Option<Vec<usize>>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.valency_product.is_none() && self.triple_balance.is_none() && self.associativity.is_none()
    }
}

/// `B[i][j] = p^j_{class,i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    pub class: TwoWayDistance,
    pub size: usize,
    pub entries: Vec<u64>,
}

impl IntersectionMatrix {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.size + j]
    }

    fn mul(&self, other: &Self) -> Vec<u64> {
        let s = self.size;
        let mut out = vec![0u64; s * s];
        for i in 0..s {
            for k in 0..s {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..s {
                    out[i * s + j] += a * other.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Display for IntersectionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Serializable snapshot of a scheme, in class order.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeTable {
    pub classes: Vec<TwoWayDistance>,
    pub dual: Vec<TwoWayDistance>,
    pub valencies: Vec<u64>,
    /// `tensor[i][j][l] = p_{i,j}^l`.
    pub tensor: Vec<Vec<Vec<u32>>>,
    pub commutative: bool,
    pub symmetric: bool,
    pub primitive: bool,
}

impl AssociationScheme {
    pub fn partition(&self) -> &RelationPartition {
        &self.partition
    }

    pub fn classes(&self) -> &[TwoWayDistance] {
        &self.partition.classes
    }

    pub fn class_count(&self) -> usize {
        self.partition.classes.len()
    }

    /// Number of non-diagonal classes.
    pub fn d(&self) -> usize {
        self.class_count() - 1
    }

    pub fn index_of(&self, label: TwoWayDistance) -> Option<usize> {
        self.partition.index_of(label)
    }

    #[inline]
    pub fn p(&self, i: usize, j: usize, l: usize) -> u32 {
        let c = self.class_count();
        self.tensor[(i * c + j) * c + l]
    }

    /// `p_{i,j}^l` by label; absent labels give 0.
    pub fn p_label(&self, i: TwoWayDistance, j: TwoWayDistance, l: TwoWayDistance) -> u32 {
        match (self.index_of(i), self.index_of(j), self.index_of(l)) {
            (Some(i), Some(j), Some(l)) => self.p(i, j, l),
            _ => 0,
        }
    }

    pub fn dual(&self, i: usize) -> usize {
        self.dual[i]
    }

    pub fn valency(&self, i: usize) -> u64 {
        self.valency[i]
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valency
    }

    /// Valency by label; absent labels give 0.
    pub fn k_label(&self, label: TwoWayDistance) -> u64 {
        self.index_of(label).map_or(0, |i| self.valency[i])
    }

    pub fn is_commutative(&self) -> bool {
        let c = self.class_count();
        (0..c).all(|i| (i + 1..c).all(|j| (0..c).all(|l| self.p(i, j, l) == self.p(j, i, l))))
    }

    pub fn is_symmetric(&self) -> bool {
        self.dual.iter().enumerate().all(|(i, &d)| i == d)
    }

    /// True iff every non-diagonal relation is a strongly connected digraph.
    pub fn is_primitive(&self) -> bool {
        let n = self.partition.n;
        (1..self.class_count()).all(|i| {
            Digraph::from_fn(n, |x, y| self.partition.class_of(x, y) == i).is_strongly_connected()
        })
    }

    pub fn check_intersection_identities(&self) -> IdentityReport {
        let c = self.class_count();
        let k = &self.valency;
        let p = |i, j, l| self.p(i, j, l) as u64;
        let mut report = IdentityReport::default();

        'product: for i in 0..c {
            for j in 0..c {
                let rhs: u64 = (0..c).map(|h| p(i, j, h) * k[h]).sum();
                if k[i] * k[j] != rhs {
                    report.valency_product = Some(vec![i, j]);
                    break 'product;
                }
            }
        }

        'balance: for i in 0..c {
            for j in 0..c {
                for l in 0..c {
                    let a = p(i, j, l) * k[l];
                    let b = p(l, self.dual[j], i) * k[i];
                    let d = p(self.dual[i], l, j) * k[j];
                    if a != b || a != d {
                        report.triple_balance = Some(vec![i, j, l]);
                        break 'balance;
                    }
                }
            }
        }

        'assoc: for i in 0..c {
            for l in 0..c {
                for m in 0..c {
                    for j in 0..c {
                        let lhs: u64 = (0..c).map(|r| p(i, l, r) * p(m, r, j)).sum();
                        let rhs: u64 = (0..c).map(|t| p(m, i, t) * p(t, l, j)).sum();
                        if lhs != rhs {
                            report.associativity = Some(vec![i, l, m, j]);
                            break 'assoc;
                        }
                    }
                }
            }
        }
        report
    }

    pub fn intersection_matrix(&self, class: TwoWayDistance) -> Result<IntersectionMatrix, SchemeError> {
        let h = self.index_of(class).ok_or(SchemeError::UnknownClass(class))?;
        Ok(self.matrix_of(h))
    }

    fn matrix_of(&self, h: usize) -> IntersectionMatrix {
        let c = self.class_count();
        let entries = (0..c * c).map(|ij| self.p(h, ij / c, ij % c) as u64).collect();
        IntersectionMatrix { class: self.partition.classes[h], size: c, entries }
    }

    /// True iff all intersection matrices pairwise commute.
    pub fn matrices_commute(&self) -> bool {
        let c = self.class_count();
        let mats: Vec<IntersectionMatrix> = (0..c).map(|h| self.matrix_of(h)).collect();
        (0..c).all(|a| (a + 1..c).all(|b| mats[a].mul(&mats[b]) == mats[b].mul(&mats[a])))
    }

    pub fn table(&self) -> SchemeTable {
        let c = self.class_count();
        SchemeTable {
            classes: self.classes().to_vec(),
            dual: self.dual.iter().map(|&d| self.partition.classes[d]).collect(),
            valencies: self.valency.clone(),
            tensor: (0..c).map(|i| (0..c).map(|j| (0..c).map(|l| self.p(i, j, l)).collect()).collect()).collect(),
            commutative: self.is_commutative(),
            symmetric: self.is_symmetric(),
            primitive: self.is_primitive(),
        }
    }

    #[cfg(test)]
    pub(crate) fn tensor_mut(&mut self) -> &mut Vec<u32> {
        &mut self.tensor
    }
}
