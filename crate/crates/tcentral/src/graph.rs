//! Directed multigraphs with a distinguished target node.
//!
//! Edges are stored as a multiplicity map `(u, v) -> m` rather than an edge
//! list, so multiset operations (sums, edge multiplication) are plain
//! integer arithmetic. Shortest-path counts use arbitrary-precision
//! integers: parallel edges multiply counts and nothing bounds them.
//!
//! All graph values are immutable after construction; every operation
//! returns a new value.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid node id {0:?}: must be non-empty and contain no whitespace")]
    InvalidNodeId(String),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("negative weight {weight} on node {node}")]
    NegativeWeight { node: NodeId, weight: f64 },
    #[error("weight on node {0} outside the graph's node set")]
    WeightOutsideGraph(NodeId),
    #[error("target {0} is not a node of the graph")]
    TargetNotInGraph(NodeId),
    #[error("node {0} cannot reach the target")]
    NotInClass(NodeId),
    #[error("operands have different targets: {0} vs {1}")]
    TargetMismatch(NodeId, NodeId),
    #[error("cannot merge a node into itself: {0}")]
    InvalidMerge(NodeId),
    #[error("merging the target requires merge_target")]
    MergeTarget,
    #[error("cannot redirect the target node")]
    RedirectTarget,
    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(NodeId, NodeId),
    #[error("cannot swap an edge starting at the target")]
    SwapFromTarget,
    #[error("cannot remove {wanted} copies of edge ({from}, {to}) with multiplicity {present}")]
    InsufficientMultiplicity {
        from: NodeId,
        to: NodeId,
        present: u64,
        wanted: u64,
    },
}

/// Opaque node identifier. Externally a non-empty string without whitespace.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(GraphError::InvalidNodeId(id));
        }
        Ok(NodeId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Convenience constructor for ids known to be well-formed (tests, fixtures).
pub fn node(id: &str) -> NodeId {
    NodeId::new(id).expect("well-formed node id")
}

/// A directed multigraph with self-loops, stored as node set plus
/// edge-multiplicity map. Absent pairs have multiplicity 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiDigraph {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<(NodeId, NodeId), u64>,
}

impl MultiDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, v: NodeId) {
        self.nodes.insert(v);
    }

    /// Removes a node together with all incident edges.
    pub fn remove_node(&mut self, v: &NodeId) -> Result<(), GraphError> {
        if !self.nodes.remove(v) {
            return Err(GraphError::UnknownNode(v.clone()));
        }
        self.edges.retain(|(a, b), _| a != v && b != v);
        Ok(())
    }

    /// Adds `m` copies of the edge (u, v). Both endpoints must be present.
    pub fn add_edges(&mut self, u: &NodeId, v: &NodeId, m: u64) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.nodes.contains(x) {
                return Err(GraphError::UnknownNode(x.clone()));
            }
        }
        if m > 0 {
            *self.edges.entry((u.clone(), v.clone())).or_insert(0) += m;
        }
        Ok(())
    }

    /// Removes `m` copies of the edge (u, v).
    pub fn remove_edges(&mut self, u: &NodeId, v: &NodeId, m: u64) -> Result<(), GraphError> {
        if m == 0 {
            return Ok(());
        }
        let key = (u.clone(), v.clone());
        let present = self.edges.get(&key).copied().unwrap_or(0);
        if present < m {
            return Err(GraphError::InsufficientMultiplicity {
                from: u.clone(),
                to: v.clone(),
                present,
                wanted: m,
            });
        }
        if present == m {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, present - m);
        }
        Ok(())
    }

    pub fn contains_node(&self, v: &NodeId) -> bool {
        self.nodes.contains(v)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.iter()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Multiplicity of the edge (u, v); 0 when absent.
    pub fn multiplicity(&self, u: &NodeId, v: &NodeId) -> u64 {
        self.edges
            .get(&(u.clone(), v.clone()))
            .copied()
            .unwrap_or(0)
    }

    /// Distinct edge pairs with their multiplicities.
    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId, u64)> {
        self.edges.iter().map(|((u, v), &m)| (u, v, m))
    }

    /// Outgoing edges of `v` as (successor, multiplicity) pairs.
    pub fn out_edges<'a>(&'a self, v: &'a NodeId) -> impl Iterator<Item = (&'a NodeId, u64)> {
        self.edges
            .iter()
            .filter(move |((a, _), _)| a == v)
            .map(|((_, b), &m)| (b, m))
    }

    /// Incoming edges of `v` as (predecessor, multiplicity) pairs.
    pub fn in_edges<'a>(&'a self, v: &'a NodeId) -> impl Iterator<Item = (&'a NodeId, u64)> {
        self.edges
            .iter()
            .filter(move |((_, b), _)| b == v)
            .map(|((a, _), &m)| (a, m))
    }

    /// Out-degree counted with multiplicity, i.e. |Γ⁺_v|.
    pub fn out_degree(&self, v: &NodeId) -> u64 {
        self.out_edges(v).map(|(_, m)| m).sum()
    }

    /// In-degree counted with multiplicity, i.e. |Γ⁻_v|.
    pub fn in_degree(&self, v: &NodeId) -> u64 {
        self.in_edges(v).map(|(_, m)| m).sum()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.edges.values().sum()
    }

    /// An id not used by any node of this graph.
    pub fn fresh_node_id(&self, prefix: &str) -> NodeId {
        let mut n = 0usize;
        loop {
            let candidate = NodeId(format!("{prefix}{n}"));
            if !self.nodes.contains(&candidate) {
                return candidate;
            }
            n += 1;
        }
    }
}

/// Node weights b: V -> R≥0. Absent nodes read as 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightVector {
    weights: BTreeMap<NodeId, f64>,
}

impl WeightVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds x·𝟙^s.
    pub fn indicator(s: &NodeId, x: f64) -> Self {
        let mut w = Self::new();
        w.set(s.clone(), x).expect("non-negative indicator weight");
        w
    }

    pub fn set(&mut self, v: NodeId, weight: f64) -> Result<(), GraphError> {
        // Rejects NaN along with negatives.
        if !weight.is_finite() || weight < 0.0 {
            return Err(GraphError::NegativeWeight { node: v, weight });
        }
        if weight == 0.0 {
            self.weights.remove(&v);
        } else {
            self.weights.insert(v, weight);
        }
        Ok(())
    }

    pub fn get(&self, v: &NodeId) -> f64 {
        self.weights.get(v).copied().unwrap_or(0.0)
    }

    /// Nodes with strictly positive weight.
    pub fn support(&self) -> impl Iterator<Item = (&NodeId, f64)> {
        self.weights.iter().map(|(v, &w)| (v, w))
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }

    /// Pointwise sum.
    pub fn plus(&self, other: &WeightVector) -> WeightVector {
        let mut out = self.clone();
        for (v, w) in other.support() {
            let cur = out.get(v);
            out.set(v.clone(), cur + w).expect("sum of non-negatives");
        }
        out
    }

    pub fn scaled(&self, x: f64) -> Result<WeightVector, GraphError> {
        let mut out = WeightVector::new();
        for (v, w) in self.support() {
            out.set(v.clone(), w * x)?;
        }
        Ok(out)
    }
}

/// Per-source shortest-path counts toward the target.
///
/// `sigma_total` is σ_{s,t}(G); `sigma_through[v]` is σ_{s,t}(G, v);
/// `dist[v]` is the distance from the source (`None` when unreachable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCountTable {
    pub source: NodeId,
    pub sigma_total: BigUint,
    pub sigma_through: BTreeMap<NodeId, BigUint>,
    pub dist: BTreeMap<NodeId, Option<u64>>,
}

impl PathCountTable {
    pub fn sigma_through(&self, v: &NodeId) -> BigUint {
        self.sigma_through.get(v).cloned().unwrap_or_else(BigUint::zero)
    }
}

/// A multigraph with a distinguished target `t` and node weights, restricted
/// to the class in which `t` is reachable from every node. Membership is
/// checked at construction and after every mutating operation.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetedGraph {
    graph: MultiDigraph,
    target: NodeId,
    weights: WeightVector,
}

impl TargetedGraph {
    pub fn new(
        graph: MultiDigraph,
        target: NodeId,
        weights: WeightVector,
    ) -> Result<Self, GraphError> {
        if !graph.contains_node(&target) {
            return Err(GraphError::TargetNotInGraph(target));
        }
        for (v, _) in weights.support() {
            if !graph.contains_node(v) {
                return Err(GraphError::WeightOutsideGraph(v.clone()));
            }
        }
        if let Some(stranded) = first_node_missing_target(&graph, &target) {
            return Err(GraphError::NotInClass(stranded));
        }
        Ok(TargetedGraph {
            graph,
            target,
            weights,
        })
    }

    pub fn graph(&self) -> &MultiDigraph {
        &self.graph
    }

    pub fn target(&self) -> &NodeId {
        &self.target
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// Same graph and target, different weights.
    pub fn with_weights(&self, weights: WeightVector) -> Result<Self, GraphError> {
        Self::new(self.graph.clone(), self.target.clone(), weights)
    }

    /// True iff every node reaches the target (class membership).
    pub fn validate_class(&self) -> bool {
        first_node_missing_target(&self.graph, &self.target).is_none()
    }

    /// Graph sum (V ∪ V', E + E', b + b'). Targets must coincide.
    pub fn graph_sum(&self, other: &TargetedGraph) -> Result<TargetedGraph, GraphError> {
        if self.target != other.target {
            return Err(GraphError::TargetMismatch(
                self.target.clone(),
                other.target.clone(),
            ));
        }
        let mut g = self.graph.clone();
        for v in other.graph.nodes() {
            g.add_node(v.clone());
        }
        for (u, v, m) in other.graph.edges() {
            g.add_edges(u, v, m)?;
        }
        TargetedGraph::new(g, self.target.clone(), self.weights.plus(&other.weights))
    }

    /// Merging M_{v→u}: deletes v, moving its weight and incident edges to u.
    /// The target cannot be merged away here; see [`merge_target`].
    ///
    /// [`merge_target`]: TargetedGraph::merge_target
    pub fn merge_nodes(&self, v: &NodeId, u: &NodeId) -> Result<TargetedGraph, GraphError> {
        if *v == self.target {
            return Err(GraphError::MergeTarget);
        }
        let (g, w) = self.merge_raw(v, u)?;
        TargetedGraph::new(g, self.target.clone(), w)
    }

    /// Merging the target into `u`, re-designating `u` as the new target.
    /// This is the Target Proxy construction; it is the only sanctioned way
    /// to merge the target.
    pub fn merge_target(&self, u: &NodeId) -> Result<TargetedGraph, GraphError> {
        let t = self.target.clone();
        let (g, w) = self.merge_raw(&t, u)?;
        TargetedGraph::new(g, u.clone(), w)
    }

    fn merge_raw(
        &self,
        v: &NodeId,
        u: &NodeId,
    ) -> Result<(MultiDigraph, WeightVector), GraphError> {
        if v == u {
            return Err(GraphError::InvalidMerge(v.clone()));
        }
        for x in [v, u] {
            if !self.graph.contains_node(x) {
                return Err(GraphError::UnknownNode(x.clone()));
            }
        }
        let map = |w: &NodeId| if w == v { u.clone() } else { w.clone() };
        let mut g = MultiDigraph::new();
        for n in self.graph.nodes() {
            if n != v {
                g.add_node(n.clone());
            }
        }
        for (a, b, m) in self.graph.edges() {
            g.add_edges(&map(a), &map(b), m)?;
        }
        let mut w = WeightVector::new();
        for (n, x) in self.weights.support() {
            let img = map(n);
            let cur = w.get(&img);
            w.set(img, cur + x)?;
        }
        Ok((g, w))
    }

    /// Redirecting R_{v→u}: deletes outgoing edges of v (keeping self-loops)
    /// and merges v into u.
    pub fn redirect_node(&self, v: &NodeId, u: &NodeId) -> Result<TargetedGraph, GraphError> {
        if *v == self.target {
            return Err(GraphError::RedirectTarget);
        }
        if v == u {
            return Err(GraphError::InvalidMerge(v.clone()));
        }
        for x in [v, u] {
            if !self.graph.contains_node(x) {
                return Err(GraphError::UnknownNode(x.clone()));
            }
        }
        let mut stripped = self.graph.clone();
        let out: Vec<(NodeId, u64)> = stripped
            .out_edges(v)
            .filter(|(w, _)| *w != v)
            .map(|(w, m)| (w.clone(), m))
            .collect();
        for (w, m) in out {
            stripped.remove_edges(v, &w, m)?;
        }
        let intermediate = TargetedGraph {
            graph: stripped,
            target: self.target.clone(),
            weights: self.weights.clone(),
        };
        intermediate.merge_nodes(v, u)
    }

    /// Reverses every edge (multiplicity preserved) and sets a new target.
    /// Fails with NotInClass when some node cannot reach the new target.
    pub fn reverse(&self, new_target: &NodeId) -> Result<TargetedGraph, GraphError> {
        if !self.graph.contains_node(new_target) {
            return Err(GraphError::UnknownNode(new_target.clone()));
        }
        let mut g = MultiDigraph::new();
        for n in self.graph.nodes() {
            g.add_node(n.clone());
        }
        for (a, b, m) in self.graph.edges() {
            g.add_edges(b, a, m)?;
        }
        TargetedGraph::new(g, new_target.clone(), self.weights.clone())
    }

    /// True iff v and u have identical outgoing multiplicity profiles.
    pub fn are_out_twins(&self, v: &NodeId, u: &NodeId) -> Result<bool, GraphError> {
        for x in [v, u] {
            if !self.graph.contains_node(x) {
                return Err(GraphError::UnknownNode(x.clone()));
            }
        }
        Ok(self
            .graph
            .nodes()
            .all(|w| self.graph.multiplicity(v, w) == self.graph.multiplicity(u, w)))
    }

    /// Edge swap: removes one copy each of (v, v') and (u, u'), adds the
    /// crossed copies (v, u') and (u, v').
    pub fn edge_swap(
        &self,
        e1: (&NodeId, &NodeId),
        e2: (&NodeId, &NodeId),
    ) -> Result<TargetedGraph, GraphError> {
        let (v, v1) = e1;
        let (u, u1) = e2;
        if *v == self.target || *u == self.target {
            return Err(GraphError::SwapFromTarget);
        }
        for (a, b) in [e1, e2] {
            if self.graph.multiplicity(a, b) == 0 {
                return Err(GraphError::MissingEdge(a.clone(), b.clone()));
            }
        }
        if v == u && v1 == u1 {
            // Swapping an edge with itself is the identity.
            return Ok(self.clone());
        }
        let mut g = self.graph.clone();
        g.remove_edges(v, v1, 1)?;
        g.remove_edges(u, u1, 1)?;
        g.add_edges(v, u1, 1)?;
        g.add_edges(u, v1, 1)?;
        TargetedGraph::new(g, self.target.clone(), self.weights.clone())
    }

    /// Edge multiplication G + k·Γ⁺_v: adds k further copies of every
    /// outgoing edge of v.
    pub fn multiply_out_edges(&self, v: &NodeId, k: u64) -> Result<TargetedGraph, GraphError> {
        if !self.graph.contains_node(v) {
            return Err(GraphError::UnknownNode(v.clone()));
        }
        let mut g = self.graph.clone();
        let out: Vec<(NodeId, u64)> = g.out_edges(v).map(|(w, m)| (w.clone(), m)).collect();
        for (w, m) in out {
            g.add_edges(v, &w, m * k)?;
        }
        TargetedGraph::new(g, self.target.clone(), self.weights.clone())
    }

    /// BFS shortest-path counts from `s` toward the target.
    ///
    /// σ is computed with edge multiplicities: a multiplicity-m edge
    /// contributes a factor m, since paths are edge sequences. Forward counts
    /// from s and backward counts toward t combine on the shortest-path DAG:
    /// σ_{s,t}(G, v) = (#shortest s→v prefixes) × (#shortest v→t suffixes)
    /// when dist(s,v) + dist(v,t) = dist(s,t). The empty path makes
    /// σ_{t,t} = 1. Self-loops never lie on shortest paths.
    pub fn shortest_path_counts(&self, s: &NodeId) -> Result<PathCountTable, GraphError> {
        if !self.graph.contains_node(s) {
            return Err(GraphError::UnknownNode(s.clone()));
        }
        let (dist_from_s, sigma_fwd) = self.directed_counts(s, Direction::Forward);
        let (dist_to_t, sigma_back) = self.directed_counts(&self.target, Direction::Backward);
        let d_total = dist_from_s[&self.target].expect("target reachable from every node");

        let mut sigma_through = BTreeMap::new();
        for v in self.graph.nodes() {
            let on_dag = match (dist_from_s[v], dist_to_t[v]) {
                (Some(a), Some(b)) => a + b == d_total,
                _ => false,
            };
            let count = if on_dag {
                &sigma_fwd[v] * &sigma_back[v]
            } else {
                BigUint::zero()
            };
            sigma_through.insert(v.clone(), count);
        }
        Ok(PathCountTable {
            source: s.clone(),
            sigma_total: sigma_fwd[&self.target].clone(),
            sigma_through,
            dist: dist_from_s,
        })
    }

    /// BFS layering from `root`, accumulating path counts along the layered
    /// DAG. Forward counts paths from root; backward counts paths to root.
    fn directed_counts(
        &self,
        root: &NodeId,
        dir: Direction,
    ) -> (BTreeMap<NodeId, Option<u64>>, BTreeMap<NodeId, BigUint>) {
        let mut dist: BTreeMap<NodeId, Option<u64>> =
            self.graph.nodes().map(|v| (v.clone(), None)).collect();
        let mut sigma: BTreeMap<NodeId, BigUint> = self
            .graph
            .nodes()
            .map(|v| (v.clone(), BigUint::zero()))
            .collect();
        dist.insert(root.clone(), Some(0));
        sigma.insert(root.clone(), BigUint::one());
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[&v].unwrap();
            let step: Vec<(NodeId, u64)> = match dir {
                Direction::Forward => self.graph.out_edges(&v).map(|(w, m)| (w.clone(), m)).collect(),
                Direction::Backward => self.graph.in_edges(&v).map(|(w, m)| (w.clone(), m)).collect(),
            };
            for (w, m) in step {
                match dist[&w] {
                    None => {
                        dist.insert(w.clone(), Some(dv + 1));
                        let add = &sigma[&v] * m;
                        sigma.insert(w.clone(), add);
                        queue.push_back(w);
                    }
                    Some(dw) if dw == dv + 1 => {
                        let add = &sigma[&v] * m;
                        let cur = sigma[&w].clone();
                        sigma.insert(w.clone(), cur + add);
                    }
                    Some(_) => {}
                }
            }
        }
        (dist, sigma)
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

/// Reverse BFS from the target; returns a node that cannot reach it, if any.
fn first_node_missing_target(graph: &MultiDigraph, target: &NodeId) -> Option<NodeId> {
    let mut seen = BTreeSet::from([target.clone()]);
    let mut queue = VecDeque::from([target.clone()]);
    while let Some(v) = queue.pop_front() {
        for (u, _) in graph.in_edges(&v) {
            if seen.insert(u.clone()) {
                queue.push_back(u.clone());
            }
        }
    }
    graph.nodes().find(|v| !seen.contains(v)).cloned()
}

/// Builds a targeted graph from literal parts; panics on invalid input.
/// Intended for fixtures and tests.
pub fn build_graph(
    target: &str,
    weighted_nodes: &[(&str, f64)],
    edges: &[(&str, &str, u64)],
) -> TargetedGraph {
    let mut g = MultiDigraph::new();
    let mut w = WeightVector::new();
    g.add_node(node(target));
    for (id, weight) in weighted_nodes {
        g.add_node(node(id));
        w.set(node(id), *weight).expect("non-negative weight");
    }
    for (u, v, m) in edges {
        g.add_node(node(u));
        g.add_node(node(v));
        g.add_edges(&node(u), &node(v), *m).expect("endpoints added");
    }
    TargetedGraph::new(g, node(target), w).expect("fixture graph in class")
}
