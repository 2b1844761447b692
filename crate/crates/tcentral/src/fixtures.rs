//! Small worked-example graphs used as test fixtures and as the first
//! stage of the counterexample search.

use crate::graph::{build_graph, node, TargetedGraph, WeightVector};

/// Five nodes, target v3, two sources with weights 1 and 2; s2 has a
/// doubled edge to v2 and v3 has a back-edge to v2.
pub fn figure1() -> TargetedGraph {
    build_graph(
        "v3",
        &[("s1", 1.0), ("s2", 2.0)],
        &[
            ("s1", "v1", 1),
            ("s2", "v2", 2),
            ("v1", "v3", 1),
            ("v2", "v3", 1),
            ("v3", "v2", 1),
        ],
    )
}

/// Three nodes, target t, single unit source s; v sits on a detour that the
/// direct edge (s, t) dominates.
pub fn figure2() -> TargetedGraph {
    build_graph(
        "t",
        &[("s", 1.0)],
        &[("s", "v", 1), ("s", "t", 1), ("v", "t", 1), ("t", "v", 1)],
    )
}

/// The reversal of [`figure2`] with target s and unit weight on t.
pub fn figure2_reversed() -> TargetedGraph {
    figure2()
        .reverse(&node("s"))
        .expect("reversal stays in class")
        .with_weights(WeightVector::indicator(&node("t"), 1.0))
        .expect("t is a node")
}

/// Five nodes, target t, two unit sources; both intermediaries feed t.
pub fn figure3() -> TargetedGraph {
    build_graph(
        "t",
        &[("s1", 1.0), ("s2", 1.0)],
        &[
            ("s1", "v1", 1),
            ("s1", "t", 1),
            ("s2", "v1", 1),
            ("s2", "v2", 1),
            ("v1", "t", 1),
            ("v2", "t", 1),
        ],
    )
}

/// The Baseline graph ({s, t}, k parallel (s, t) edges) with unit source.
pub fn baseline(k: u64) -> TargetedGraph {
    build_graph("t", &[("s", 1.0)], &[("s", "t", k)])
}
