//! Enumeration of orientations of a graph and the commutative-WDRD filter.
//!
//! Every edge `{u,v}` (`u < v`, lexicographic order) takes one of three states:
//! the arc `u→v`, the arc `v→u`, or both. The search walks the `3^|E|`
//! assignments depth-first with the first edge most significant and checks
//! each complete assignment, cheapest predicates first.

mod canon;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dgf;
use crate::digraph::{Digraph, TwoWayDistance};
use crate::scheme::{verify_association_scheme, AssociationScheme, RelationPartition};
use crate::wdrd::wdrd_report;

pub use canon::{are_isomorphic, canonical_form, canonical_labeling, CanonicalForm, DEFAULT_CANON_CAP};

/// Default edge cap for enumeration.
pub const DEFAULT_MAX_EDGES: usize = 20;
/// Beyond this the candidate count no longer fits in a `u64`.
pub const HARD_MAX_EDGES: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("the underlying graph must be symmetric")]
    NotSymmetric,
    #[error("{edges} edges exceed the cap of {cap}")]
    TooManyEdges { edges: usize, cap: usize },
    #[error("{n} vertices exceed the canonicalization cap of {cap}")]
    TooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeState {
    Forward,
    Backward,
    Digon,
}

impl EdgeState {
    pub const ALL: [EdgeState; 3] = [EdgeState::Forward, EdgeState::Backward, EdgeState::Digon];
}

fn check_input(g: &Digraph, max_edges: usize) -> Result<Vec<(usize, usize)>, SearchError> {
    if !g.is_symmetric() {
        return Err(SearchError::NotSymmetric);
    }
    if g.n() > 64 {
        return Err(SearchError::TooLarge { n: g.n(), cap: 64 });
    }
    let edges = g.edges();
    let cap = max_edges.min(HARD_MAX_EDGES);
    if edges.len() > cap {
        return Err(SearchError::TooManyEdges { edges: edges.len(), cap });
    }
    Ok(edges)
}

/// Builds the digraph with the given state per edge.
pub fn orient(n: usize, edges: &[(usize, usize)], states: &[EdgeState]) -> Digraph {
    let mut rows = vec![0u64; n];
    for (&(u, v), s) in edges.iter().zip(states) {
        apply(&mut rows, u, v, *s);
    }
    Digraph::from_fn(n, |u, v| rows[u] >> v & 1 == 1)
}

fn apply(rows: &mut [u64], u: usize, v: usize, s: EdgeState) {
    match s {
        EdgeState::Forward => rows[u] |= 1 << v,
        EdgeState::Backward => rows[v] |= 1 << u,
        EdgeState::Digon => {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
    }
}

fn unapply(rows: &mut [u64], u: usize, v: usize) {
    rows[u] &= !(1 << v);
    rows[v] &= !(1 << u);
}

/// All `3^|E|` orientations of `g` in odometer order.
pub struct Orientations {
    n: usize,
    edges: Vec<(usize, usize)>,
    states: Vec<u8>,
    done: bool,
}

pub fn enumerate_orientations(g: &Digraph, max_edges: usize) -> Result<Orientations, SearchError> {
    let edges = check_input(g, max_edges)?;
    Ok(Orientations { n: g.n(), states: vec![0; edges.len()], edges, done: false })
}

impl Iterator for Orientations {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        if self.done {
            return None;
        }
        let states: Vec<EdgeState> = self.states.iter().map(|&s| EdgeState::ALL[s as usize]).collect();
        let d = orient(self.n, &self.edges, &states);
        // advance, last edge fastest
        self.done = true;
        for s in self.states.iter_mut().rev() {
            if *s < 2 {
                *s += 1;
                self.done = false;
                break;
            }
            *s = 0;
        }
        Some(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prune {
    #[default]
    None,
    /// Per-vertex bounds on digons and one-way arcs.
    DigonCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub jobs: usize,
    pub prune: Prune,
    pub max_edges: usize,
    pub use_reversal: bool,
    pub canon_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 1,
            prune: Prune::None,
            max_edges: DEFAULT_MAX_EDGES,
            use_reversal: false,
            canon_cap: DEFAULT_CANON_CAP,
        }
    }
}

/// One isomorphism class of found digraphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoClass {
    pub canonical: CanonicalForm,
    /// Labeled orientations of the input graph falling in this class.
    pub labeled_count: u64,
    pub type_set: Vec<u32>,
    pub classes: Vec<TwoWayDistance>,
    pub valencies: Vec<u64>,
    pub commutative: bool,
    /// The canonically labeled representative in DGF.
    pub dgf: String,
}

impl IsoClass {
    pub fn digraph(&self) -> Digraph {
        self.canonical.digraph()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub graph_id: String,
    pub vertices: usize,
    pub edges: usize,
    pub total_candidates: u64,
    /// Candidates that reached the leaf checks.
    pub examined: u64,
    /// Labeled commutative WDRDs.
    pub wdrd_count: u64,
    pub iso_classes: Vec<IsoClass>,
    pub non_commutative_count: u64,
    pub non_commutative_classes: Vec<IsoClass>,
    /// Candidates rejected or skipped, by reason. Together with the accepted
    /// ones these add up to `total_candidates`.
    pub prune_stats: BTreeMap<String, u64>,
}

impl SearchReport {
    /// Whether two reports found the same digraphs, ignoring how much work it
    /// took.
    pub fn same_findings(&self, other: &SearchReport) -> bool {
        self.total_candidates == other.total_candidates
            && self.wdrd_count == other.wdrd_count
            && self.iso_classes == other.iso_classes
            && self.non_commutative_count == other.non_commutative_count
            && self.non_commutative_classes == other.non_commutative_classes
    }
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph {} ({} vertices, {} edges)", self.graph_id, self.vertices, self.edges)?;
        writeln!(f, "candidates {}  examined {}", self.total_candidates, self.examined)?;
        writeln!(f, "commutative WDRDs {} in {} classes", self.wdrd_count, self.iso_classes.len())?;
        for (i, c) in self.iso_classes.iter().enumerate() {
            let t: Vec<String> = c.type_set.iter().map(u32::to_string).collect();
            writeln!(f, "  class {i}: T={{{}}} labeled={} form={}", t.join(","), c.labeled_count, c.canonical)?;
        }
        writeln!(
            f,
            "non-commutative WDRDs {} in {} classes",
            self.non_commutative_count,
            self.non_commutative_classes.len()
        )?;
        for (reason, count) in &self.prune_stats {
            writeln!(f, "  {reason:<28} {count}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Leaf {
    AllDigon,
    NotStronglyConnected,
    Scheme(&'static str),
    SymmetricScheme,
    NonCommutative,
    Commutative,
}

impl Leaf {
    fn reason(self) -> String {
        match self {
            Leaf::AllDigon => "all-digon".into(),
            Leaf::NotStronglyConnected => "not-strongly-connected".into(),
            Leaf::Scheme(kind) => format!("scheme-{kind}"),
            Leaf::SymmetricScheme => "symmetric-scheme".into(),
            Leaf::NonCommutative => "non-commutative".into(),
            Leaf::Commutative => unreachable!("accepted candidates are not rejections"),
        }
    }
}

fn check_leaf(d: &Digraph, all_digon: bool) -> Leaf {
    if all_digon {
        return Leaf::AllDigon;
    }
    if !d.is_strongly_connected() {
        return Leaf::NotStronglyConnected;
    }
    let partition = RelationPartition::attached(d).expect("strongly connected");
    let scheme: AssociationScheme = match verify_association_scheme(&partition) {
        Ok(s) => s,
        Err(v) => return Leaf::Scheme(v.kind()),
    };
    if scheme.is_symmetric() {
        return Leaf::SymmetricScheme;
    }
    if scheme.is_commutative() {
        Leaf::Commutative
    } else {
        Leaf::NonCommutative
    }
}

/// Per-branch tallies; merged in branch order.
#[derive(Default)]
struct Tally {
    examined: u64,
    leaves: BTreeMap<Leaf, u64>,
    found: BTreeMap<(bool, CanonicalForm), u64>,
    error: Option<SearchError>,
}

impl Tally {
    fn merge(&mut self, other: Tally) {
        self.examined += other.examined;
        for (k, v) in other.leaves {
            *self.leaves.entry(k).or_default() += v;
        }
        for (k, v) in other.found {
            *self.found.entry(k).or_default() += v;
        }
        if self.error.is_none() {
            self.error = other.error;
        }
    }
}

struct Walker<'a> {
    g: &'a Digraph,
    n: usize,
    edges: &'a [(usize, usize)],
    opts: &'a SearchOptions,
    /// Per-vertex limits on (digons, out-only, in-only) when pruning.
    limits: Option<Vec<(u32, u32, u32)>>,
    rows: Vec<u64>,
    counts: Vec<(u32, u32, u32)>,
    digons: usize,
    /// Whether every edge assigned so far is a digon.
    all_digon_prefix: bool,
    tally: Tally,
}

impl<'a> Walker<'a> {
    fn new(g: &'a Digraph, edges: &'a [(usize, usize)], opts: &'a SearchOptions, digon_degree: Option<u32>) -> Self {
        let n = g.n();
        let limits = digon_degree.map(|d| {
            (0..n)
                .map(|v| {
                    let h = (g.out_degree(v) as u32).saturating_sub(d) / 2;
                    (d, h, h)
                })
                .collect()
        });
        Walker {
            g,
            n,
            edges,
            opts,
            limits,
            rows: vec![0; n],
            counts: vec![(0, 0, 0); n],
            digons: 0,
            all_digon_prefix: true,
            tally: Tally::default(),
        }
    }

    fn bump(&mut self, u: usize, v: usize, s: EdgeState, delta: i32) {
        let add = |x: &mut u32| *x = x.wrapping_add_signed(delta);
        match s {
            EdgeState::Forward => {
                add(&mut self.counts[u].1);
                add(&mut self.counts[v].2);
            }
            EdgeState::Backward => {
                add(&mut self.counts[v].1);
                add(&mut self.counts[u].2);
            }
            EdgeState::Digon => {
                add(&mut self.counts[u].0);
                add(&mut self.counts[v].0);
            }
        }
    }

    fn within_limits(&self, u: usize, v: usize) -> bool {
        let Some(limits) = &self.limits else { return true };
        [u, v].iter().all(|&w| {
            let (c, l) = (self.counts[w], limits[w]);
            c.0 <= l.0 && c.1 <= l.1 && c.2 <= l.2
        })
    }

    /// Assigns edge `i`; returns false if the assignment is cut.
    fn push(&mut self, i: usize, s: EdgeState) -> Option<bool> {
        let (u, v) = self.edges[i];
        if self.opts.use_reversal && self.all_digon_prefix && s == EdgeState::Backward {
            return None;
        }
        apply(&mut self.rows, u, v, s);
        self.bump(u, v, s, 1);
        let was = self.all_digon_prefix;
        if s == EdgeState::Digon {
            self.digons += 1;
        } else {
            self.all_digon_prefix = false;
        }
        if !self.within_limits(u, v) {
            self.pop(i, s, was);
            return None;
        }
        Some(was)
    }

    fn pop(&mut self, i: usize, s: EdgeState, was: bool) {
        let (u, v) = self.edges[i];
        unapply(&mut self.rows, u, v);
        self.bump(u, v, s, -1);
        if s == EdgeState::Digon {
            self.digons -= 1;
        }
        self.all_digon_prefix = was;
    }

    fn walk(&mut self, i: usize) {
        if self.tally.error.is_some() {
            return;
        }
        if i == self.edges.len() {
            self.leaf();
            return;
        }
        for s in EdgeState::ALL {
            if let Some(was) = self.push(i, s) {
                self.walk(i + 1);
                self.pop(i, s, was);
            }
        }
    }

    fn leaf(&mut self) {
        let d = Digraph::from_fn(self.n, |u, v| self.rows[u] >> v & 1 == 1);
        self.tally.examined += 1;
        if cfg!(debug_assertions) && self.tally.examined % 10_000 == 1 {
            assert_eq!(d.underlying_graph(), *self.g, "orientation lost an edge");
        }
        let leaf = check_leaf(&d, self.digons == self.edges.len());
        *self.tally.leaves.entry(leaf).or_default() += 1;
        if !matches!(leaf, Leaf::Commutative | Leaf::NonCommutative) {
            return;
        }
        let commutative = leaf == Leaf::Commutative;
        let mut record = |d: &Digraph| match canonical_form(d, self.opts.canon_cap) {
            Ok(f) => *self.tally.found.entry((commutative, f)).or_default() += 1,
            Err(e) => self.tally.error = Some(e),
        };
        record(&d);
        if self.opts.use_reversal {
            // the reversal was skipped and is a WDRD of the same kind
            record(&d.reverse());
        }
    }
}

/// Number of prefix-fixed edges so that there are at least four branches per
/// worker.
fn split_depth(edges: usize, jobs: usize) -> usize {
    let mut k = 0;
    while k < edges && 3usize.pow(k as u32) < 4 * jobs.max(1) {
        k += 1;
    }
    k
}

fn run_branch(
    g: &Digraph,
    edges: &[(usize, usize)],
    opts: &SearchOptions,
    digon_degree: Option<u32>,
    prefix: &[EdgeState],
) -> Tally {
    let mut w = Walker::new(g, edges, opts, digon_degree);
    for (i, &s) in prefix.iter().enumerate() {
        if w.push(i, s).is_none() {
            return w.tally;
        }
    }
    w.walk(prefix.len());
    w.tally
}

fn prefixes(k: usize) -> Vec<Vec<EdgeState>> {
    (0..3usize.pow(k as u32))
        .map(|mut x| {
            let mut p = vec![EdgeState::Forward; k];
            for slot in p.iter_mut().rev() {
                *slot = EdgeState::ALL[x % 3];
                x /= 3;
            }
            p
        })
        .collect()
}

fn certify(form: CanonicalForm, labeled_count: u64) -> IsoClass {
    let d = form.digraph();
    let report = wdrd_report(&d);
    let scheme = report.scheme().expect("found digraphs re-verify as WDRDs");
    assert!(report.is_wdrd, "found digraph failed re-verification");
    IsoClass {
        labeled_count,
        type_set: report.type_set.iter().copied().collect(),
        classes: scheme.classes().to_vec(),
        valencies: scheme.valencies().to_vec(),
        commutative: report.commutative,
        dgf: dgf::write(&d),
        canonical: form,
    }
}

/// Enumerates the orientations of `g` and collects the commutative WDRDs up
/// to isomorphism. Non-commutative WDRDs are collected separately.
pub fn search_commutative_wdrd(g: &Digraph, graph_id: &str, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    let edges = check_input(g, opts.max_edges)?;
    if g.n() > opts.canon_cap.min(64) {
        return Err(SearchError::TooLarge { n: g.n(), cap: opts.canon_cap.min(64) });
    }
    let m = edges.len();
    let total = 3u64.pow(m as u32);

    let digon_degrees: Vec<Option<u32>> = match opts.prune {
        Prune::None => vec![None],
        Prune::DigonCount => {
            let max_deg = (0..g.n()).map(|v| g.out_degree(v)).max().unwrap_or(0) as u32;
            (0..=max_deg).filter(|&d| (0..g.n()).all(|v| (g.out_degree(v) as u32) >= d && (g.out_degree(v) as u32 - d) % 2 == 0)).map(Some).collect()
        }
    };
    let k = split_depth(m, opts.jobs);
    let branches: Vec<(Option<u32>, Vec<EdgeState>)> =
        digon_degrees.iter().flat_map(|&d| prefixes(k).into_iter().map(move |p| (d, p))).collect();

    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs.max(1)).build().expect("thread pool");
    let tallies: Vec<Tally> =
        pool.install(|| branches.par_iter().map(|(d, p)| run_branch(g, &edges, opts, *d, p)).collect());
    let mut tally = Tally::default();
    for t in tallies {
        tally.merge(t);
    }
    if let Some(e) = tally.error {
        return Err(e);
    }

    let mut prune_stats: BTreeMap<String, u64> = BTreeMap::new();
    for (&leaf, &count) in &tally.leaves {
        if leaf != Leaf::Commutative {
            prune_stats.insert(leaf.reason(), count);
        }
    }
    let skipped_by_reversal = if opts.use_reversal { (total - 1) / 2 } else { 0 };
    if opts.use_reversal {
        prune_stats.insert("reversal-skipped".into(), skipped_by_reversal);
    }
    if opts.prune == Prune::DigonCount {
        prune_stats.insert("degree-balance".into(), total - skipped_by_reversal - tally.examined);
    }

    let mut iso_classes = Vec::new();
    let mut non_commutative_classes = Vec::new();
    for ((commutative, form), count) in tally.found {
        let class = certify(form, count);
        if commutative {
            iso_classes.push(class);
        } else {
            non_commutative_classes.push(class);
        }
    }
    Ok(SearchReport {
        graph_id: graph_id.to_string(),
        vertices: g.n(),
        edges: m,
        total_candidates: total,
        examined: tally.examined,
        wdrd_count: iso_classes.iter().map(|c| c.labeled_count).sum(),
        non_commutative_count: non_commutative_classes.iter().map(|c| c.labeled_count).sum(),
        iso_classes,
        non_commutative_classes,
        prune_stats,
    })
}
