//! Weak distance-regularity and the local structure around arcs and
//! distance-2 pairs.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::digraph::{Digraph, GraphError, TwoWayDistance, INFINITY};
use crate::generators::{intersection_array, DrgError};
use crate::scheme::{verify_association_scheme, AssociationScheme, AxiomViolation, RelationPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WdrdError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{y} is not a common neighbour of {x} and {z} in the underlying graph")]
    NotCommonNeighbour { x: usize, z: usize, y: usize },
    #[error("pair ({x},{z}) is at underlying distance {distance}, expected 1 or 2")]
    BadDistance { x: usize, z: usize, distance: u32 },
    #[error("underlying graph is not distance-regular: {0}")]
    UnderlyingNotDistanceRegular(DrgError),
    #[error("class {0} is not at underlying distance 1 or 2")]
    BadClass(TwoWayDistance),
    #[error("class {0} does not occur")]
    UnknownClass(TwoWayDistance),
    #[error("pair ({x},{z}) has two-way distance {found}, not (2,2)")]
    NotType22 { x: usize, z: usize, found: TwoWayDistance },
    #[error("pair ({x},{z}) has {size} common neighbours, expected 4")]
    BadMuSize { x: usize, z: usize, size: usize },
    #[error("common neighbours of ({x},{z}) match no five-case pattern: {pattern}")]
    NoMatchingCase { x: usize, z: usize, pattern: String },
    #[error("common neighbours of ({x},{z}) match several patterns: {cases:?}")]
    AmbiguousCase { x: usize, z: usize, cases: Vec<u8> },
}

/// Outcome of analysing one digraph.
#[derive(Debug, Clone)]
pub struct WdrdReport {
    pub strongly_connected: bool,
    /// `None` when the digraph is not strongly connected.
    pub scheme: Option<Result<AssociationScheme, AxiomViolation>>,
    pub non_symmetric: bool,
    pub is_wdrd: bool,
    /// Meaningful only when `is_wdrd`.
    pub commutative: bool,
    pub type_set: BTreeSet<u32>,
}

impl WdrdReport {
    pub fn scheme(&self) -> Option<&AssociationScheme> {
        self.scheme.as_ref().and_then(|s| s.as_ref().ok())
    }

    pub fn violation(&self) -> Option<&AxiomViolation> {
        self.scheme.as_ref().and_then(|s| s.as_ref().err())
    }

    pub fn is_commutative_wdrd(&self) -> bool {
        self.is_wdrd && self.commutative
    }
}

pub fn wdrd_report(d: &Digraph) -> WdrdReport {
    let strongly_connected = d.is_strongly_connected();
    if !strongly_connected {
        return WdrdReport {
            strongly_connected,
            scheme: None,
            non_symmetric: false,
            is_wdrd: false,
            commutative: false,
            type_set: BTreeSet::new(),
        };
    }
    let partition = RelationPartition::attached(d).expect("strongly connected");
    let type_set = type_set_of(&partition);
    let scheme = verify_association_scheme(&partition);
    let (non_symmetric, commutative) = match &scheme {
        Ok(s) => (!s.is_symmetric(), s.is_commutative()),
        // Without a scheme, non-symmetry of the partition itself.
        Err(_) => (partition.classes().iter().any(|t| t.forward != t.backward), false),
    };
    let is_wdrd = scheme.is_ok() && non_symmetric;
    WdrdReport { strongly_connected, scheme: Some(scheme), non_symmetric, is_wdrd, commutative, type_set }
}

fn type_set_of(p: &RelationPartition) -> BTreeSet<u32> {
    p.classes().iter().filter(|t| t.forward == 1).map(|t| t.backward + 1).collect()
}

/// `{q+1 : (1,q) is a two-way distance}`.
pub fn type_set(d: &Digraph) -> Result<BTreeSet<u32>, GraphError> {
    Ok(d.two_way_distance_set()?.into_iter().filter(|t| t.forward == 1).map(|t| t.backward + 1).collect())
}

/// The six ways a common neighbour `y` of `x` and `z` can sit between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PathCase {
    /// `(x,y,z)` is a pure path.
    C1,
    /// `(z,y,x)` is a pure path.
    C2,
    /// `(x,y,z)` is a mixed path.
    C3,
    /// `(z,y,x)` is a mixed path.
    C4,
    /// Non-path with `(x,y)` an arc.
    C5,
    /// Non-path with `(y,x)` an arc.
    C6,
}

/// Case of a common neighbour together with the two-way distances of
/// `(x,y)` and `(y,z)`, i.e. the `P_{first,second}(x,z)` it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathClass {
    pub case: PathCase,
    pub first: TwoWayDistance,
    pub second: TwoWayDistance,
}

impl PathClass {
    /// The case parameters in subscript order: `p` twice for C1/C2, `(p,q)`
    /// for C3, `(q,p)` for C4, `(r,s)` for C5 and `(s,r)` for C6.
    pub fn params(&self) -> (u32, u32) {
        let non_one = |t: TwoWayDistance| if t.forward == 1 { t.backward } else { t.forward };
        (non_one(self.first), non_one(self.second))
    }
}

impl fmt::Display for PathClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}{}", self.case, self.first, self.second)
    }
}

/// Classifies `y` relative to the pair `(x,z)`. When both `(x,y)` and
/// `(y,z)` are digons the path is pure in both directions and C1 is reported.
pub fn classify_common_neighbour(d: &Digraph, x: usize, z: usize, y: usize) -> Result<PathClass, WdrdError> {
    let n = d.n();
    for v in [x, y, z] {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
        }
    }
    if !d.is_strongly_connected() {
        return Err(GraphError::NotStronglyConnected.into());
    }
    if x == z {
        return Err(WdrdError::BadDistance { x, z, distance: 0 });
    }
    if y == x || y == z || !d.adjacent(x, y) || !d.adjacent(y, z) {
        return Err(WdrdError::NotCommonNeighbour { x, z, y });
    }
    Ok(classify_unchecked(d, x, z, y))
}

pub(crate) fn classify_unchecked(d: &Digraph, x: usize, z: usize, y: usize) -> PathClass {
    let dm = d.distance_matrix();
    let first = dm.two_way(x, y);
    let second = dm.two_way(y, z);
    let forward_path = d.has_arc(x, y) && d.has_arc(y, z);
    let backward_path = d.has_arc(z, y) && d.has_arc(y, x);
    let case = if forward_path {
        if first == second {
            PathCase::C1
        } else {
            PathCase::C3
        }
    } else if backward_path {
        if first == second {
            PathCase::C2
        } else {
            PathCase::C4
        }
    } else if d.has_arc(x, y) {
        PathCase::C5
    } else {
        PathCase::C6
    };
    PathClass { case, first, second }
}

/// Both sides of the local counting identity for one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LocalCount {
    pub class: TwoWayDistance,
    /// Distance of the class's pairs in the underlying graph (1 or 2).
    pub underlying_distance: u32,
    /// Sum of `p^h_{i,j}` over classes `i`, `j` that contain an arc.
    pub sum: u64,
    /// `a_1` or `c_2` of the underlying graph.
    pub expected: u64,
}

impl LocalCount {
    pub fn holds(&self) -> bool {
        self.sum == self.expected
    }
}

fn has_arc_class(t: TwoWayDistance) -> bool {
    t.forward == 1 || t.backward == 1
}

/// Underlying-graph distance of the pairs in class `hi`, if they all agree.
fn class_distance(s: &AssociationScheme, underlying: &Digraph, hi: usize) -> Option<u32> {
    let dm = underlying.distance_matrix();
    let p = s.partition();
    let mut found = None;
    for x in 0..p.n() {
        for y in p.neighbours(x, hi) {
            match found {
                None => found = Some(dm.get(x, y)),
                Some(k) if k != dm.get(x, y) => return None,
                Some(_) => {}
            }
        }
    }
    found
}

/// Sums the tensor entries over arc-containing classes and compares with
/// `a_1` (class at underlying distance 1) or `c_2` (distance 2).
pub fn verify_local_counts(d: &Digraph, s: &AssociationScheme, h: TwoWayDistance) -> Result<LocalCount, WdrdError> {
    let hi = s.index_of(h).ok_or(WdrdError::UnknownClass(h))?;
    if s.partition().n() != d.n() {
        return Err(WdrdError::UnknownClass(h));
    }
    let underlying = d.underlying_graph();
    let underlying_distance = match class_distance(s, &underlying, hi) {
        Some(k @ (1 | 2)) => k,
        _ => return Err(WdrdError::BadClass(h)),
    };
    let array = intersection_array(&underlying).map_err(WdrdError::UnderlyingNotDistanceRegular)?;
    let expected = match underlying_distance {
        1 => array.a_at(1),
        _ => array.c_at(2),
    }
    .ok_or(WdrdError::BadClass(h))?;
    let arcs: Vec<usize> = (0..s.class_count()).filter(|&i| has_arc_class(s.classes()[i])).collect();
    let sum = arcs.iter().flat_map(|&i| arcs.iter().map(move |&j| (i, j))).map(|(i, j)| s.p(i, j, hi) as u64).sum();
    Ok(LocalCount { class: h, underlying_distance, sum, expected })
}

/// Classes whose pairs lie at distance 1 or 2 in the underlying graph, for
/// sweeping [`verify_local_counts`].
pub fn local_classes(d: &Digraph, s: &AssociationScheme) -> Vec<TwoWayDistance> {
    let underlying = d.underlying_graph();
    (1..s.class_count())
        .filter(|&i| matches!(class_distance(s, &underlying, i), Some(1 | 2)))
        .map(|i| s.classes()[i])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Purity {
    Pure,
    /// Some circuit of length `q+1` through a `(1,q)` arc uses another arc type.
    Mixed,
    NoSuchType,
}

/// Decides whether every circuit of length `q+1` through every arc of type
/// `(1,q)` uses only `(1,q)` arcs. Intermediate vertices are allowed to
/// repeat, though the return walk is always a shortest path.
pub fn arc_purity(d: &Digraph, q: u32) -> Result<Purity, WdrdError> {
    arc_purity_witness(d, q).map(|(p, _)| p)
}

/// As [`arc_purity`], also returning a mixed circuit (vertices from the arc's
/// tail) when one exists.
pub fn arc_purity_witness(d: &Digraph, q: u32) -> Result<(Purity, Option<Vec<usize>>), WdrdError> {
    let dm = d.distance_matrix();
    if !dm.all_finite() {
        return Err(GraphError::NotStronglyConnected.into());
    }
    let of_type = |u: usize, v: usize| d.has_arc(u, v) && dm.get(v, u) == q;
    let typed: Vec<(usize, usize)> = d.arcs().filter(|&(u, v)| of_type(u, v)).collect();
    if typed.is_empty() {
        return Ok((Purity::NoSuchType, None));
    }
    let mut walk = Vec::with_capacity(q as usize + 1);
    for (u, v) in typed {
        walk.clear();
        walk.push(u);
        walk.push(v);
        if find_mixed(d, &of_type, u, q as usize - 1, false, &mut walk) {
            return Ok((Purity::Mixed, Some(walk)));
        }
    }
    Ok((Purity::Pure, None))
}

/// Depth-first over walks from the last vertex of `walk` that close at `target`
/// after exactly `remaining` more arcs, looking for one with an off-type arc.
fn find_mixed(
    d: &Digraph,
    of_type: &impl Fn(usize, usize) -> bool,
    target: usize,
    remaining: usize,
    mixed: bool,
    walk: &mut Vec<usize>,
) -> bool {
    let at = *walk.last().unwrap();
    let dm = d.distance_matrix();
    if remaining == 0 {
        return d.has_arc(at, target) && (mixed || !of_type(at, target));
    }
    for w in d.out_neighbours(at) {
        let back = dm.get(w, target);
        if back == INFINITY || back as usize > remaining {
            continue;
        }
        walk.push(w);
        if find_mixed(d, of_type, target, remaining - 1, mixed || !of_type(at, w), walk) {
            return true;
        }
        walk.pop();
    }
    false
}

/// The five configurations of the four common neighbours of a `(2,2)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MuCase {
    /// Four pure digon paths.
    AllDigon,
    /// Two pure `(1,2)` paths each way.
    PureTwo,
    /// Four mixed paths over types `p < q`, `(p,q)` in `{(1,2),(2,3)}`.
    Mixed { p: u32, q: u32 },
    /// Two digon paths and a non-path pair of type `r`.
    DigonNonPath { r: u32 },
    /// One pure `(1,p)` path each way and a non-path pair of type `r`.
    PureNonPath { p: u32, r: u32 },
}

impl MuCase {
    pub fn id(&self) -> u8 {
        match self {
            MuCase::AllDigon => 1,
            MuCase::PureTwo => 2,
            MuCase::Mixed { .. } => 3,
            MuCase::DigonNonPath { .. } => 4,
            MuCase::PureNonPath { .. } => 5,
        }
    }
}

type Membership = (TwoWayDistance, TwoWayDistance);

fn t(f: u32, b: u32) -> TwoWayDistance {
    TwoWayDistance::new(f, b)
}

fn same_multiset(mut a: Vec<Membership>, mut b: Vec<Membership>) -> bool {
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn match_case(id: u8, found: &[Membership]) -> Option<MuCase> {
    let v = found.to_vec();
    match id {
        1 => same_multiset(v, vec![(t(1, 1), t(1, 1)); 4]).then_some(MuCase::AllDigon),
        2 => same_multiset(v, vec![(t(1, 2), t(1, 2)), (t(1, 2), t(1, 2)), (t(2, 1), t(2, 1)), (t(2, 1), t(2, 1))])
            .then_some(MuCase::PureTwo),
        3 => [(1, 2), (2, 3)].into_iter().find_map(|(p, q)| {
            let want = vec![(t(1, p), t(1, q)), (t(1, q), t(1, p)), (t(p, 1), t(q, 1)), (t(q, 1), t(p, 1))];
            same_multiset(v.clone(), want).then_some(MuCase::Mixed { p, q })
        }),
        4 => {
            let r = non_path_type(found)?;
            let want = vec![(t(1, 1), t(1, 1)), (t(1, 1), t(1, 1)), (t(1, r), t(r, 1)), (t(r, 1), t(1, r))];
            same_multiset(v, want).then_some(MuCase::DigonNonPath { r })
        }
        5 => {
            let r = non_path_type(found)?;
            [2, 3].into_iter().find_map(|p| {
                let want = vec![(t(1, p), t(1, p)), (t(p, 1), t(p, 1)), (t(1, r), t(r, 1)), (t(r, 1), t(1, r))];
                same_multiset(v.clone(), want).then_some(MuCase::PureNonPath { p, r })
            })
        }
        _ => None,
    }
}

/// `r` of the first `(1,r),(r,1)` non-path membership, if any.
fn non_path_type(found: &[Membership]) -> Option<u32> {
    found
        .iter()
        .find(|(a, b)| a.forward == 1 && a.backward >= 2 && b.backward == 1 && b.forward == a.backward)
        .map(|(a, _)| a.backward)
}

/// Identifies which of the five patterns the common neighbours of a `(2,2)`
/// pair realize. Each template is tried; exactly one must match.
pub fn mu_case(d: &Digraph, x: usize, z: usize) -> Result<MuCase, WdrdError> {
    let n = d.n();
    for v in [x, z] {
        if v >= n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n }.into());
        }
    }
    if !d.is_strongly_connected() {
        return Err(GraphError::NotStronglyConnected.into());
    }
    let found_t = d.two_way_distance(x, z);
    if found_t != t(2, 2) {
        return Err(WdrdError::NotType22 { x, z, found: found_t });
    }
    let common = d.common_neighbours_unchecked(x, z);
    if common.len() != 4 {
        return Err(WdrdError::BadMuSize { x, z, size: common.len() });
    }
    let found: Vec<Membership> = common
        .iter()
        .map(|&y| {
            let c = classify_unchecked(d, x, z, y);
            (c.first, c.second)
        })
        .collect();
    let matches: Vec<MuCase> = (1..=5).filter_map(|id| match_case(id, &found)).collect();
    match matches.as_slice() {
        [one] => Ok(*one),
        [] => {
            let pattern = found.iter().map(|(a, b)| format!("{a}{b}")).collect::<Vec<_>>().join(" ");
            Err(WdrdError::NoMatchingCase { x, z, pattern })
        }
        many => Err(WdrdError::AmbiguousCase { x, z, cases: many.iter().map(MuCase::id).collect() }),
    }
}

/// Pairs of type `(2,2)`, in lexicographic order.
pub fn type22_pairs(d: &Digraph) -> Vec<(usize, usize)> {
    let n = d.n();
    let dm = d.distance_matrix();
    (0..n).flat_map(|x| (0..n).map(move |z| (x, z))).filter(|&(x, z)| dm.two_way(x, z) == t(2, 2)).collect()
}
