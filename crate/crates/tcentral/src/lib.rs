//! Target-oriented centrality measures on directed multigraphs.
//!
//! The library computes four medial centralities relative to a designated
//! target node: stress, betweenness, random-walk betweenness and a decayed
//! random-walk variant (PageRank-style). All four are defined on the class
//! of multigraphs in which the target is reachable from every node.
//!
//! Alongside the analytic implementations ([`centrality`]) there are
//! independent brute-force oracles ([`oracle`]) and an axiom-checking
//! harness ([`axioms`]) that tests which structural properties each
//! measure satisfies and produces replayable counterexamples for the ones
//! it does not.

pub mod axioms;
pub mod centrality;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod oracle;

pub use centrality::{
    betweenness, evaluate, pagerank, random_walk_betweenness, stress, CentralityVector,
    DecayFactor, Measure,
};
pub use graph::{MultiDigraph, NodeId, TargetedGraph, WeightVector};
