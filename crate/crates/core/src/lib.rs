//! Weakly distance-regular digraphs: construction, scheme analysis, and
//! exhaustive classification of orientations of small graphs.
//!
//! ```
//! use wdrd_core::{cayley_cyclic, wdrd_report, CayleySpec};
//!
//! let d = cayley_cyclic(&CayleySpec::new(6, vec![1, 4]).unwrap());
//! let r = wdrd_report(&d);
//! assert!(r.is_commutative_wdrd());
//! assert_eq!(r.type_set.into_iter().collect::<Vec<_>>(), vec![3]);
//! ```

pub mod dgf;
pub mod digraph;
pub mod generators;
pub mod scheme;
pub mod search;
pub mod structure;
pub mod wdrd;

pub use dgf::DgfError;
pub use digraph::{Digraph, DistanceMatrix, GraphError, TwoWayDistance, INFINITY};
pub use generators::{
    cayley_cyclic, complete, folded_johnson, intersection_array, johnson, predicted_array, ArrayKind, CayleySpec,
    DrgError, Family, GeneratorError, IntersectionArray, LabeledGraph,
};
pub use scheme::{
    verify_association_scheme, AssociationScheme, AxiomViolation, IdentityReport, IntersectionMatrix,
    RelationPartition, SchemeError, SchemeTable,
};
pub use search::{
    are_isomorphic, canonical_form, enumerate_orientations, search_commutative_wdrd, CanonicalForm, EdgeState,
    IsoClass, Prune, SearchError, SearchOptions, SearchReport,
};
pub use structure::{
    mu_graph_property, subset_swap, sweep_neighbourhoods, verify_neighbourhood_structure, y_sets, MuGraphReport,
    NeighbourhoodReport, StructureError, SubsetVertex,
};
pub use wdrd::{
    arc_purity, classify_common_neighbour, mu_case, type_set, verify_local_counts, wdrd_report, LocalCount, MuCase,
    PathCase, PathClass, Purity, WdrdError, WdrdReport,
};
