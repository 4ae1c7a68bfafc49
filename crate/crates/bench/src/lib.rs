//! Shared inputs for the benchmarks.

use wdrd_core::{cayley_cyclic, johnson, CayleySpec, Digraph};

/// The two commutative WDRDs on six vertices.
pub fn cayley_pair() -> [Digraph; 2] {
    [[1, 2], [1, 4]].map(|s| cayley_cyclic(&CayleySpec::new(6, s.to_vec()).expect("valid connection set")))
}

/// Underlying graph of the six-vertex classification.
pub fn octahedron() -> Digraph {
    johnson(4, 2).expect("valid parameters").graph().clone()
}

/// Johnson graphs of increasing size for the distance and scheme benches.
pub fn johnson_ladder() -> Vec<(String, Digraph)> {
    [(5, 2), (6, 3), (8, 3), (9, 4)]
        .into_iter()
        .map(|(n, e)| {
            let g = johnson(n, e).expect("valid parameters");
            (g.name(), g.graph().clone())
        })
        .collect()
}
