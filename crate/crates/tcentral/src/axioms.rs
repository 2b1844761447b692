//! Axiom checkers, randomized trial drivers and the satisfaction matrix.
//!
//! Each axiom has a checker that takes a concrete instance, verifies the
//! axiom's preconditions, applies the graph transformation and compares
//! centrality values on both sides. Instances serialize to a replayable
//! form ([`CheckInstance`]) so that every reported violation can be
//! re-verified from its serialized witness alone.
//!
//! The matrix runner pairs every axiom with every measure. Cells expected
//! to hold are stress-tested on random graphs (any violation is a bug);
//! cells expected to fail are refuted by a staged search: known small
//! shapes first, then random trials, then an exhaustive sweep of graphs
//! with at most 4 nodes and total edge multiplicity at most 6.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::centrality::{evaluate, CentralityVector, Measure};
use crate::fixtures;
use crate::graph::{build_graph, node, MultiDigraph, NodeId, TargetedGraph, WeightVector};
use crate::io::{parse_graph, serialize_graph, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AxiomId {
    Locality,
    Additivity,
    NodeRedirect,
    TargetProxy,
    Symmetry,
    DirectLinkDomination,
    EdgeSwap,
    EdgeMultiplication,
    Baseline11,
    BaselineKK,
    Baseline1A,
    Anonymity,
    TargetSelfLoop,
    NoTargetOutlet,
    Siphon,
}

impl AxiomId {
    pub fn name(&self) -> &'static str {
        match self {
            AxiomId::Locality => "locality",
            AxiomId::Additivity => "additivity",
            AxiomId::NodeRedirect => "node-redirect",
            AxiomId::TargetProxy => "target-proxy",
            AxiomId::Symmetry => "symmetry",
            AxiomId::DirectLinkDomination => "direct-link-domination",
            AxiomId::EdgeSwap => "edge-swap",
            AxiomId::EdgeMultiplication => "edge-multiplication",
            AxiomId::Baseline11 => "baseline-1-1",
            AxiomId::BaselineKK => "baseline-k-k",
            AxiomId::Baseline1A => "baseline-1-a",
            AxiomId::Anonymity => "anonymity",
            AxiomId::TargetSelfLoop => "target-self-loop",
            AxiomId::NoTargetOutlet => "no-target-outlet",
            AxiomId::Siphon => "siphon",
        }
    }

    pub fn parse(s: &str) -> Option<AxiomId> {
        ALL_AXIOMS.iter().copied().find(|a| a.name() == s)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const ALL_AXIOMS: [AxiomId; 15] = [
    AxiomId::Locality,
    AxiomId::Additivity,
    AxiomId::NodeRedirect,
    AxiomId::TargetProxy,
    AxiomId::Symmetry,
    AxiomId::DirectLinkDomination,
    AxiomId::EdgeSwap,
    AxiomId::EdgeMultiplication,
    AxiomId::Baseline11,
    AxiomId::BaselineKK,
    AxiomId::Baseline1A,
    AxiomId::Anonymity,
    AxiomId::TargetSelfLoop,
    AxiomId::NoTargetOutlet,
    AxiomId::Siphon,
];

/// Rows of the satisfaction matrix, excluding the baseline row.
pub const MATRIX_AXIOMS: [AxiomId; 8] = [
    AxiomId::Locality,
    AxiomId::Additivity,
    AxiomId::NodeRedirect,
    AxiomId::TargetProxy,
    AxiomId::Symmetry,
    AxiomId::DirectLinkDomination,
    AxiomId::EdgeSwap,
    AxiomId::EdgeMultiplication,
];

/// Derived facts checked the same way as axioms but not part of the matrix.
pub const LEMMAS: [AxiomId; 4] = [
    AxiomId::Anonymity,
    AxiomId::TargetSelfLoop,
    AxiomId::NoTargetOutlet,
    AxiomId::Siphon,
];

const BASELINE_VARIANTS: [AxiomId; 3] = [
    AxiomId::Baseline11,
    AxiomId::BaselineKK,
    AxiomId::Baseline1A,
];

/// Which cells of the matrix are expected to hold.
pub fn expected_satisfied(axiom: AxiomId, measure: Measure) -> bool {
    use AxiomId::*;
    match axiom {
        Symmetry | DirectLinkDomination => {
            matches!(measure, Measure::Stress | Measure::Betweenness)
        }
        EdgeSwap | EdgeMultiplication => matches!(
            measure,
            Measure::RandomWalkBetweenness | Measure::PageRank
        ),
        _ => true,
    }
}

/// Expected baseline-row entry per measure.
pub fn expected_baseline_variant(measure: Measure) -> AxiomId {
    match measure {
        Measure::Stress => AxiomId::BaselineKK,
        Measure::Betweenness | Measure::RandomWalkBetweenness => AxiomId::Baseline11,
        Measure::PageRank => AxiomId::Baseline1A,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    /// The axiom's preconditions are not met by this instance.
    Inapplicable,
}

/// A fully serialized, replayable axiom instance. Graphs are embedded in
/// the text format of [`crate::io`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum CheckInstance {
    Locality { g1: String, g2: String },
    Additivity { g: String, extra: BTreeMap<String, f64> },
    NodeRedirect { g: String, v: String, u: String },
    TargetProxy { g: String, proxy: String },
    Symmetry { g: String, s: String },
    DirectLinkDomination { g: String, v: String, u: String },
    EdgeSwap { g: String, e1: (String, String), e2: (String, String) },
    EdgeMultiplication { g: String, v: String, k: u64 },
    Baseline { variant: AxiomId, k: u64 },
    Anonymity { g: String, v: String, fresh: String },
    TargetSelfLoop { g: String },
    NoTargetOutlet { g: String, v: String },
    Siphon { g: String, v: String },
}

impl CheckInstance {
    pub fn axiom(&self) -> AxiomId {
        match self {
            CheckInstance::Locality { .. } => AxiomId::Locality,
            CheckInstance::Additivity { .. } => AxiomId::Additivity,
            CheckInstance::NodeRedirect { .. } => AxiomId::NodeRedirect,
            CheckInstance::TargetProxy { .. } => AxiomId::TargetProxy,
            CheckInstance::Symmetry { .. } => AxiomId::Symmetry,
            CheckInstance::DirectLinkDomination { .. } => AxiomId::DirectLinkDomination,
            CheckInstance::EdgeSwap { .. } => AxiomId::EdgeSwap,
            CheckInstance::EdgeMultiplication { .. } => AxiomId::EdgeMultiplication,
            CheckInstance::Baseline { variant, .. } => *variant,
            CheckInstance::Anonymity { .. } => AxiomId::Anonymity,
            CheckInstance::TargetSelfLoop { .. } => AxiomId::TargetSelfLoop,
            CheckInstance::NoTargetOutlet { .. } => AxiomId::NoTargetOutlet,
            CheckInstance::Siphon { .. } => AxiomId::Siphon,
        }
    }
}

/// The worst failing equality of a violated instance, with enough context
/// to replay the whole check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub axiom: AxiomId,
    pub measure: Measure,
    pub alpha: Option<f64>,
    pub instance: CheckInstance,
    pub node: String,
    pub lhs: f64,
    pub rhs: f64,
    pub delta: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheckResult {
    pub axiom: AxiomId,
    pub measure: Measure,
    pub alpha: Option<f64>,
    pub verdict: Verdict,
    /// Present iff the verdict is Violated.
    pub witness: Option<Witness>,
    /// Present iff the verdict is Inapplicable.
    pub reason: Option<String>,
}

fn inapplicable(
    axiom: AxiomId,
    measure: Measure,
    alpha: Option<f64>,
    reason: impl Into<String>,
) -> AxiomCheckResult {
    AxiomCheckResult {
        axiom,
        measure,
        alpha,
        verdict: Verdict::Inapplicable,
        witness: None,
        reason: Some(reason.into()),
    }
}

/// One asserted equality: lhs comes from the transformed side.
struct Claim {
    node: String,
    lhs: f64,
    rhs: f64,
}

/// Absolute tolerance scaled by the total source weight involved.
fn tol_for(total_weight: f64) -> f64 {
    1e-9 * total_weight.max(1.0)
}

fn conclude(
    axiom: AxiomId,
    measure: Measure,
    alpha: Option<f64>,
    instance: CheckInstance,
    claims: Vec<Claim>,
    tolerance: f64,
) -> AxiomCheckResult {
    let mut worst: Option<(Claim, f64)> = None;
    for c in claims {
        let delta = (c.lhs - c.rhs).abs();
        if delta > tolerance && worst.as_ref().is_none_or(|(_, d)| delta > *d) {
            worst = Some((c, delta));
        }
    }
    match worst {
        Some((c, delta)) => AxiomCheckResult {
            axiom,
            measure,
            alpha,
            verdict: Verdict::Violated,
            witness: Some(Witness {
                axiom,
                measure,
                alpha,
                instance,
                node: c.node,
                lhs: c.lhs,
                rhs: c.rhs,
                delta,
                tolerance,
            }),
            reason: None,
        },
        None => AxiomCheckResult {
            axiom,
            measure,
            alpha,
            verdict: Verdict::Holds,
            witness: None,
            reason: None,
        },
    }
}

fn eval(g: &TargetedGraph, measure: Measure, alpha: Option<f64>) -> CentralityVector {
    evaluate(g, measure, alpha).expect("measure evaluable on class graphs")
}

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

/// Locality: for G, G' sharing only the target, values on the sum graph
/// restrict to the values on each part; the target gets the sum.
pub fn check_locality(
    measure: Measure,
    alpha: Option<f64>,
    g1: &TargetedGraph,
    g2: &TargetedGraph,
) -> AxiomCheckResult {
    let axiom = AxiomId::Locality;
    let t = g1.target();
    if g2.target() != t {
        return inapplicable(axiom, measure, alpha, "targets differ");
    }
    let shared: Vec<&NodeId> = g1
        .graph()
        .nodes()
        .filter(|v| g2.graph().contains_node(v))
        .collect();
    if shared != vec![t] {
        return inapplicable(axiom, measure, alpha, "node sets overlap beyond the target");
    }
    let sum = match g1.graph_sum(g2) {
        Ok(sum) => sum,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f1 = eval(g1, measure, alpha);
    let f2 = eval(g2, measure, alpha);
    let fs = eval(&sum, measure, alpha);
    let mut claims = Vec::new();
    for w in g1.graph().nodes().filter(|w| *w != t) {
        claims.push(Claim {
            node: w.to_string(),
            lhs: fs.get(w),
            rhs: f1.get(w),
        });
    }
    for w in g2.graph().nodes().filter(|w| *w != t) {
        claims.push(Claim {
            node: w.to_string(),
            lhs: fs.get(w),
            rhs: f2.get(w),
        });
    }
    claims.push(Claim {
        node: t.to_string(),
        lhs: fs.get(t),
        rhs: f1.get(t) + f2.get(t),
    });
    let instance = CheckInstance::Locality {
        g1: serialize_graph(g1),
        g2: serialize_graph(g2),
    };
    let tol = tol_for(g1.weights().total() + g2.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Additivity: F(G, b + b') = F(G, b) + F(G, b') pointwise.
pub fn check_additivity(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    extra: &WeightVector,
) -> AxiomCheckResult {
    let axiom = AxiomId::Additivity;
    let g2 = match g.with_weights(extra.clone()) {
        Ok(g2) => g2,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let gsum = g
        .with_weights(g.weights().plus(extra))
        .expect("support unchanged");
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&g2, measure, alpha);
    let fs = eval(&gsum, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: fs.get(w),
            rhs: f1.get(w) + f2.get(w),
        })
        .collect();
    let instance = CheckInstance::Additivity {
        g: serialize_graph(g),
        extra: extra.support().map(|(v, x)| (v.to_string(), x)).collect(),
    };
    let tol = tol_for(g.weights().total() + extra.total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Node Redirect: out-twins v, u (profiles not touching the pair itself)
/// may be redirected v into u; u's value becomes the sum, others keep theirs.
pub fn check_node_redirect(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    v: &NodeId,
    u: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::NodeRedirect;
    let t = g.target();
    if v == u || v == t || u == t {
        return inapplicable(axiom, measure, alpha, "needs distinct non-target nodes");
    }
    match g.are_out_twins(v, u) {
        Ok(true) => {}
        Ok(false) => return inapplicable(axiom, measure, alpha, "not out-twins"),
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    }
    let gr = g.graph();
    if gr.multiplicity(v, v) > 0
        || gr.multiplicity(u, u) > 0
        || gr.multiplicity(v, u) > 0
        || gr.multiplicity(u, v) > 0
    {
        return inapplicable(axiom, measure, alpha, "twin profiles touch the pair");
    }
    let redirected = match g.redirect_node(v, u) {
        Ok(r) => r,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&redirected, measure, alpha);
    let mut claims = vec![Claim {
        node: u.to_string(),
        lhs: f2.get(u),
        rhs: f1.get(u) + f1.get(v),
    }];
    for w in g.graph().nodes().filter(|w| *w != v && *w != u) {
        claims.push(Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        });
    }
    let instance = CheckInstance::NodeRedirect {
        g: serialize_graph(g),
        v: v.to_string(),
        u: u.to_string(),
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Target Proxy: when the target's only in-edge comes from a proxy whose
/// only out-edge feeds the target, and the target is unweighted, merging
/// the target into the proxy changes no other value.
pub fn check_target_proxy(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    proxy: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::TargetProxy;
    let t = g.target();
    if proxy == t || !g.graph().contains_node(proxy) {
        return inapplicable(axiom, measure, alpha, "proxy must be a non-target node");
    }
    let gr = g.graph();
    if gr.in_degree(t) != 1 || gr.multiplicity(proxy, t) != 1 {
        return inapplicable(axiom, measure, alpha, "target in-edges not exactly one proxy edge");
    }
    if gr.out_degree(proxy) != 1 {
        return inapplicable(axiom, measure, alpha, "proxy has out-edges beyond the target");
    }
    if g.weights().get(t) != 0.0 {
        return inapplicable(axiom, measure, alpha, "target carries weight");
    }
    let merged = match g.merge_target(proxy) {
        Ok(m) => m,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&merged, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .filter(|w| *w != t)
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::TargetProxy {
        g: serialize_graph(g),
        proxy: proxy.to_string(),
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Symmetry: with b = 𝟙^s, reversing all edges and swapping the roles of s
/// and the target preserves every value. Applicable only when the reversal
/// stays in class, i.e. every node is reachable from s.
pub fn check_symmetry(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    s: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::Symmetry;
    if !g.graph().contains_node(s) {
        return inapplicable(axiom, measure, alpha, "source not in graph");
    }
    let t = g.target().clone();
    let base = g
        .with_weights(WeightVector::indicator(s, 1.0))
        .expect("source is a node");
    let reversed = match base.reverse(s) {
        Ok(r) => r,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let reversed = reversed
        .with_weights(WeightVector::indicator(&t, 1.0))
        .expect("old target is a node");
    let f1 = eval(&base, measure, alpha);
    let f2 = eval(&reversed, measure, alpha);
    let claims = base
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::Symmetry {
        g: serialize_graph(&base),
        s: s.to_string(),
    };
    conclude(axiom, measure, alpha, instance, claims, tol_for(1.0))
}

/// Direct Link Domination: when v links straight to the target, deleting a
/// copy of a detour edge (v, u), u ≠ t, changes no value.
pub fn check_direct_link_domination(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    v: &NodeId,
    u: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::DirectLinkDomination;
    let t = g.target();
    if v == t || u == t {
        return inapplicable(axiom, measure, alpha, "v and u must differ from the target");
    }
    if g.graph().multiplicity(v, t) == 0 || g.graph().multiplicity(v, u) == 0 {
        return inapplicable(axiom, measure, alpha, "edges (v, t) and (v, u) required");
    }
    let mut reduced = g.graph().clone();
    reduced
        .remove_edges(v, u, 1)
        .expect("edge presence checked");
    let reduced = match TargetedGraph::new(reduced, t.clone(), g.weights().clone()) {
        Ok(r) => r,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&reduced, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::DirectLinkDomination {
        g: serialize_graph(g),
        v: v.to_string(),
        u: u.to_string(),
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Edge Swap: two nodes of equal centrality and equal out-degree may swap
/// edge endpoints without changing any value. Instances whose centralities
/// are close but not equal within tolerance are skipped as inapplicable
/// rather than misread as exact ties.
pub fn check_edge_swap(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    e1: (&NodeId, &NodeId),
    e2: (&NodeId, &NodeId),
) -> AxiomCheckResult {
    let axiom = AxiomId::EdgeSwap;
    let (v, v1) = e1;
    let (u, u1) = e2;
    let t = g.target();
    if v == t || u == t {
        return inapplicable(axiom, measure, alpha, "swapped edges must not leave the target");
    }
    for (a, b) in [e1, e2] {
        if g.graph().multiplicity(a, b) == 0 {
            return inapplicable(axiom, measure, alpha, format!("edge ({a}, {b}) absent"));
        }
    }
    if g.graph().out_degree(v) != g.graph().out_degree(u) {
        return inapplicable(axiom, measure, alpha, "out-degrees differ");
    }
    let f1 = eval(g, measure, alpha);
    let tol = tol_for(g.weights().total());
    let gap = (f1.get(v) - f1.get(u)).abs();
    if gap > tol {
        if gap <= 1e-6 * g.weights().total().max(1.0) {
            return inapplicable(axiom, measure, alpha, "near-tie in centralities, skipped");
        }
        return inapplicable(axiom, measure, alpha, "unequal centralities");
    }
    let swapped = match g.edge_swap(e1, e2) {
        Ok(s) => s,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f2 = eval(&swapped, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::EdgeSwap {
        g: serialize_graph(g),
        e1: (v.to_string(), v1.to_string()),
        e2: (u.to_string(), u1.to_string()),
    };
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Edge Multiplication: adding k extra copies of every out-edge of v
/// changes no value.
pub fn check_edge_multiplication(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    v: &NodeId,
    k: u64,
) -> AxiomCheckResult {
    let axiom = AxiomId::EdgeMultiplication;
    let multiplied = match g.multiply_out_edges(v, k) {
        Ok(m) => m,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&multiplied, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::EdgeMultiplication {
        g: serialize_graph(g),
        v: v.to_string(),
        k,
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Baseline: on ({s, t}, k parallel (s, t) edges, b = 𝟙^s) the variant
/// states the values of s and t. The 1-a variant demands F_t strictly
/// below F_s = 1.
pub fn check_baseline(
    measure: Measure,
    alpha: Option<f64>,
    variant: AxiomId,
    k: u64,
) -> AxiomCheckResult {
    debug_assert!(BASELINE_VARIANTS.contains(&variant));
    if k == 0 {
        return inapplicable(variant, measure, alpha, "k must be positive");
    }
    let g = fixtures::baseline(k);
    let f = eval(&g, measure, alpha);
    let s = f.get(&node("s"));
    let t = f.get(&node("t"));
    let tol = tol_for(1.0);
    let instance = CheckInstance::Baseline { variant, k };
    let mut claims = Vec::new();
    match variant {
        AxiomId::Baseline11 => {
            claims.push(Claim { node: "s".into(), lhs: s, rhs: 1.0 });
            claims.push(Claim { node: "t".into(), lhs: t, rhs: 1.0 });
        }
        AxiomId::BaselineKK => {
            claims.push(Claim { node: "s".into(), lhs: s, rhs: k as f64 });
            claims.push(Claim { node: "t".into(), lhs: t, rhs: k as f64 });
        }
        AxiomId::Baseline1A => {
            claims.push(Claim { node: "s".into(), lhs: s, rhs: 1.0 });
            // Strict dominance of the source over the target.
            if t >= 1.0 - tol {
                claims.push(Claim { node: "t".into(), lhs: t, rhs: 0.0 });
            }
        }
        _ => unreachable!("variant checked above"),
    }
    conclude(variant, measure, alpha, instance, claims, tol)
}

/// Anonymity: renaming a node leaves all values in place (lemma).
pub fn check_anonymity(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    v: &NodeId,
    fresh: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::Anonymity;
    if !g.graph().contains_node(v) || g.graph().contains_node(fresh) {
        return inapplicable(axiom, measure, alpha, "rename needs an existing node and a fresh id");
    }
    let map = |w: &NodeId| if w == v { fresh.clone() } else { w.clone() };
    let mut renamed = MultiDigraph::new();
    for w in g.graph().nodes() {
        renamed.add_node(map(w));
    }
    for (a, b, m) in g.graph().edges() {
        renamed
            .add_edges(&map(a), &map(b), m)
            .expect("nodes just added");
    }
    let mut weights = WeightVector::new();
    for (w, x) in g.weights().support() {
        weights.set(map(w), x).expect("non-negative weight");
    }
    let renamed = TargetedGraph::new(renamed, map(g.target()), weights)
        .expect("renaming preserves class");
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&renamed, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(&map(w)),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::Anonymity {
        g: serialize_graph(g),
        v: v.to_string(),
        fresh: fresh.to_string(),
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Target Self-Loop: a self-loop at the target is invisible (lemma).
pub fn check_target_self_loop(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
) -> AxiomCheckResult {
    let axiom = AxiomId::TargetSelfLoop;
    let t = g.target().clone();
    if g.graph().multiplicity(&t, &t) == 0 {
        return inapplicable(axiom, measure, alpha, "no target self-loop present");
    }
    let mut reduced = g.graph().clone();
    reduced.remove_edges(&t, &t, 1).expect("loop present");
    let reduced = TargetedGraph::new(reduced, t, g.weights().clone())
        .expect("loop removal preserves class");
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&reduced, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::TargetSelfLoop { g: serialize_graph(g) };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// No Target Outlet: edges leaving the target are invisible (lemma).
pub fn check_no_target_outlet(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    v: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::NoTargetOutlet;
    let t = g.target().clone();
    if v == &t {
        return inapplicable(axiom, measure, alpha, "self-loops covered by target-self-loop");
    }
    if g.graph().multiplicity(&t, v) == 0 {
        return inapplicable(axiom, measure, alpha, "edge (t, v) absent");
    }
    let mut reduced = g.graph().clone();
    reduced.remove_edges(&t, v, 1).expect("edge present");
    let reduced = match TargetedGraph::new(reduced, t, g.weights().clone()) {
        Ok(r) => r,
        Err(e) => return inapplicable(axiom, measure, alpha, e.to_string()),
    };
    let f1 = eval(g, measure, alpha);
    let f2 = eval(&reduced, measure, alpha);
    let claims = g
        .graph()
        .nodes()
        .map(|w| Claim {
            node: w.to_string(),
            lhs: f2.get(w),
            rhs: f1.get(w),
        })
        .collect();
    let instance = CheckInstance::NoTargetOutlet {
        g: serialize_graph(g),
        v: v.to_string(),
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Siphon: a non-target node with no incoming edges keeps exactly its own
/// weight under betweenness and the random-walk measures (lemma).
pub fn check_siphon(
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
    v: &NodeId,
) -> AxiomCheckResult {
    let axiom = AxiomId::Siphon;
    if measure == Measure::Stress {
        return inapplicable(axiom, measure, alpha, "stress scales by the path count");
    }
    if v == g.target() || !g.graph().contains_node(v) {
        return inapplicable(axiom, measure, alpha, "needs a non-target node");
    }
    if g.graph().in_degree(v) != 0 {
        return inapplicable(axiom, measure, alpha, "node has incoming edges");
    }
    let f = eval(g, measure, alpha);
    let claims = vec![Claim {
        node: v.to_string(),
        lhs: f.get(v),
        rhs: g.weights().get(v),
    }];
    let instance = CheckInstance::Siphon {
        g: serialize_graph(g),
        v: v.to_string(),
    };
    let tol = tol_for(g.weights().total());
    conclude(axiom, measure, alpha, instance, claims, tol)
}

/// Re-runs a serialized instance from scratch.
pub fn replay(
    measure: Measure,
    alpha: Option<f64>,
    instance: &CheckInstance,
) -> Result<AxiomCheckResult, ParseError> {
    let id = |s: &str| NodeId::new(s).map_err(|_| ParseError::Syntax(0, format!("bad id {s:?}")));
    Ok(match instance {
        CheckInstance::Locality { g1, g2 } => {
            check_locality(measure, alpha, &parse_graph(g1)?, &parse_graph(g2)?)
        }
        CheckInstance::Additivity { g, extra } => {
            let mut w = WeightVector::new();
            for (v, x) in extra {
                w.set(id(v)?, *x)
                    .map_err(|_| ParseError::NegativeWeight(0, *x))?;
            }
            check_additivity(measure, alpha, &parse_graph(g)?, &w)
        }
        CheckInstance::NodeRedirect { g, v, u } => {
            check_node_redirect(measure, alpha, &parse_graph(g)?, &id(v)?, &id(u)?)
        }
        CheckInstance::TargetProxy { g, proxy } => {
            check_target_proxy(measure, alpha, &parse_graph(g)?, &id(proxy)?)
        }
        CheckInstance::Symmetry { g, s } => {
            check_symmetry(measure, alpha, &parse_graph(g)?, &id(s)?)
        }
        CheckInstance::DirectLinkDomination { g, v, u } => {
            check_direct_link_domination(measure, alpha, &parse_graph(g)?, &id(v)?, &id(u)?)
        }
        CheckInstance::EdgeSwap { g, e1, e2 } => {
            let g = parse_graph(g)?;
            let (a, b) = (id(&e1.0)?, id(&e1.1)?);
            let (c, d) = (id(&e2.0)?, id(&e2.1)?);
            check_edge_swap(measure, alpha, &g, (&a, &b), (&c, &d))
        }
        CheckInstance::EdgeMultiplication { g, v, k } => {
            check_edge_multiplication(measure, alpha, &parse_graph(g)?, &id(v)?, *k)
        }
        CheckInstance::Baseline { variant, k } => check_baseline(measure, alpha, *variant, *k),
        CheckInstance::Anonymity { g, v, fresh } => {
            check_anonymity(measure, alpha, &parse_graph(g)?, &id(v)?, &id(fresh)?)
        }
        CheckInstance::TargetSelfLoop { g } => {
            check_target_self_loop(measure, alpha, &parse_graph(g)?)
        }
        CheckInstance::NoTargetOutlet { g, v } => {
            check_no_target_outlet(measure, alpha, &parse_graph(g)?, &id(v)?)
        }
        CheckInstance::Siphon { g, v } => {
            check_siphon(measure, alpha, &parse_graph(g)?, &id(v)?)
        }
    })
}

// ---------------------------------------------------------------------------
// Random graph generation and trial drivers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GraphGenConfig {
    pub max_nodes: usize,
    pub max_multiplicity: u64,
    pub edge_density: f64,
    pub weight_range: (f64, f64),
    pub seed: u64,
    pub trials: usize,
}

impl Default for GraphGenConfig {
    fn default() -> Self {
        GraphGenConfig {
            max_nodes: 8,
            max_multiplicity: 3,
            edge_density: 0.3,
            weight_range: (0.0, 2.0),
            seed: 42,
            trials: 200,
        }
    }
}

/// Nodes from which the target is reachable (class repair helper).
fn reaching_set(g: &MultiDigraph, t: &NodeId) -> Vec<NodeId> {
    let mut seen = vec![t.clone()];
    let mut queue = vec![t.clone()];
    while let Some(v) = queue.pop() {
        for (u, _) in g.in_edges(&v) {
            if !seen.contains(u) {
                seen.push(u.clone());
                queue.push(u.clone());
            }
        }
    }
    seen
}

fn reachable_from(g: &MultiDigraph, s: &NodeId) -> Vec<NodeId> {
    let mut seen = vec![s.clone()];
    let mut queue = vec![s.clone()];
    while let Some(v) = queue.pop() {
        for (u, _) in g.out_edges(&v) {
            if !seen.contains(u) {
                seen.push(u.clone());
                queue.push(u.clone());
            }
        }
    }
    seen
}

/// Draws a random class-valid graph. Node ids are `{prefix}v1`, ...; the
/// target id is passed separately so locality trials can share it.
pub fn generate_graph(
    cfg: &GraphGenConfig,
    rng: &mut ChaCha8Rng,
    target_id: &str,
    prefix: &str,
) -> TargetedGraph {
    let n = rng.gen_range(1..=cfg.max_nodes.max(1));
    let mut ids = vec![node(target_id)];
    for i in 1..n {
        ids.push(node(&format!("{prefix}v{i}")));
    }
    let mut g = MultiDigraph::new();
    for id in &ids {
        g.add_node(id.clone());
    }
    for a in 0..n {
        for b in 0..n {
            // Self-loops are rarer so most mass sits on real transitions.
            let p = if a == b {
                cfg.edge_density * 0.3
            } else {
                cfg.edge_density
            };
            if rng.gen_bool(p.clamp(0.0, 1.0)) {
                let m = rng.gen_range(1..=cfg.max_multiplicity.max(1));
                g.add_edges(&ids[a], &ids[b], m).expect("nodes added");
            }
        }
    }
    // Repair pass: every node must reach the target.
    loop {
        let reaching = reaching_set(&g, &ids[0]);
        let stranded: Vec<NodeId> = ids
            .iter()
            .filter(|v| !reaching.contains(v))
            .cloned()
            .collect();
        if stranded.is_empty() {
            break;
        }
        let from = stranded[rng.gen_range(0..stranded.len())].clone();
        let to = reaching[rng.gen_range(0..reaching.len())].clone();
        g.add_edges(&from, &to, 1).expect("nodes present");
    }
    let (lo, hi) = cfg.weight_range;
    let mut w = WeightVector::new();
    for id in &ids {
        if rng.gen_bool(0.6) {
            w.set(id.clone(), rng.gen_range(lo..=hi)).expect("lo >= 0");
        }
    }
    if w.total() == 0.0 {
        w.set(ids[rng.gen_range(0..n)].clone(), 1.0)
            .expect("unit weight");
    }
    TargetedGraph::new(g, ids[0].clone(), w).expect("repaired into class")
}

fn random_node(g: &TargetedGraph, rng: &mut ChaCha8Rng) -> NodeId {
    let nodes: Vec<&NodeId> = g.graph().nodes().collect();
    nodes[rng.gen_range(0..nodes.len())].clone()
}

fn random_non_target(g: &TargetedGraph, rng: &mut ChaCha8Rng) -> Option<NodeId> {
    let nodes: Vec<&NodeId> = g.graph().nodes().filter(|v| *v != g.target()).collect();
    if nodes.is_empty() {
        None
    } else {
        Some(nodes[rng.gen_range(0..nodes.len())].clone())
    }
}

/// Instantiates one randomized trial of an axiom or lemma, planting
/// whatever structure its preconditions demand, and runs the checker.
pub fn run_trial(
    axiom: AxiomId,
    measure: Measure,
    alpha: Option<f64>,
    cfg: &GraphGenConfig,
    rng: &mut ChaCha8Rng,
) -> AxiomCheckResult {
    match axiom {
        AxiomId::Locality => {
            let g1 = generate_graph(cfg, rng, "t", "a");
            let g2 = generate_graph(cfg, rng, "t", "b");
            check_locality(measure, alpha, &g1, &g2)
        }
        AxiomId::Additivity => {
            let g = generate_graph(cfg, rng, "t", "");
            let (lo, hi) = cfg.weight_range;
            let mut extra = WeightVector::new();
            for v in g.graph().nodes() {
                if rng.gen_bool(0.5) {
                    extra
                        .set(v.clone(), rng.gen_range(lo..=hi))
                        .expect("lo >= 0");
                }
            }
            check_additivity(measure, alpha, &g, &extra)
        }
        AxiomId::NodeRedirect => {
            let g = generate_graph(cfg, rng, "t", "");
            // Plant an out-twin of a loop-free non-target node.
            let candidates: Vec<NodeId> = g
                .graph()
                .nodes()
                .filter(|v| *v != g.target() && g.graph().multiplicity(v, v) == 0)
                .cloned()
                .collect();
            let Some(v) = candidates
                .get(rng.gen_range(0..candidates.len().max(1)))
                .cloned()
            else {
                return inapplicable(axiom, measure, alpha, "no loop-free non-target node");
            };
            let twin = g.graph().fresh_node_id("w");
            let mut g2 = g.graph().clone();
            g2.add_node(twin.clone());
            let profile: Vec<(NodeId, u64)> = g
                .graph()
                .out_edges(&v)
                .map(|(w, m)| (w.clone(), m))
                .collect();
            for (w, m) in profile {
                g2.add_edges(&twin, &w, m).expect("nodes present");
            }
            if rng.gen_bool(0.5) {
                let from = random_node(&g, rng);
                if from != twin {
                    g2.add_edges(&from, &twin, rng.gen_range(1..=cfg.max_multiplicity.max(1)))
                        .expect("nodes present");
                }
            }
            let mut w = g.weights().clone();
            let (lo, hi) = cfg.weight_range;
            w.set(twin.clone(), rng.gen_range(lo..=hi)).expect("lo >= 0");
            let planted = TargetedGraph::new(g2, g.target().clone(), w)
                .expect("twin shares the original's escape routes");
            check_node_redirect(measure, alpha, &planted, &twin, &v)
        }
        AxiomId::TargetProxy => {
            let g = generate_graph(cfg, rng, "t", "");
            // The old target becomes the proxy of a fresh terminal node.
            let old_t = g.target().clone();
            let mut g2 = g.graph().clone();
            let out: Vec<(NodeId, u64)> = g2
                .out_edges(&old_t)
                .map(|(w, m)| (w.clone(), m))
                .collect();
            for (w, m) in out {
                g2.remove_edges(&old_t, &w, m).expect("edge present");
            }
            let fresh_t = g2.fresh_node_id("p");
            g2.add_node(fresh_t.clone());
            g2.add_edges(&old_t, &fresh_t, 1).expect("nodes present");
            let planted = TargetedGraph::new(g2, fresh_t, g.weights().clone())
                .expect("all nodes reach the proxy, the proxy reaches the new target");
            check_target_proxy(measure, alpha, &planted, &old_t)
        }
        AxiomId::Symmetry => {
            let g = generate_graph(cfg, rng, "t", "");
            let s = random_node(&g, rng);
            // Repair pass: reversal stays in class iff everything is
            // reachable from s.
            let mut g2 = g.graph().clone();
            loop {
                let reached = reachable_from(&g2, &s);
                let stranded: Vec<NodeId> = g2
                    .nodes()
                    .filter(|v| !reached.contains(v))
                    .cloned()
                    .collect();
                if stranded.is_empty() {
                    break;
                }
                let to = stranded[rng.gen_range(0..stranded.len())].clone();
                let from = reached[rng.gen_range(0..reached.len())].clone();
                g2.add_edges(&from, &to, 1).expect("nodes present");
            }
            let planted = TargetedGraph::new(g2, g.target().clone(), g.weights().clone())
                .expect("added edges cannot break class");
            check_symmetry(measure, alpha, &planted, &s)
        }
        AxiomId::DirectLinkDomination => {
            let g = generate_graph(cfg, rng, "t", "");
            let Some(v) = random_non_target(&g, rng) else {
                return inapplicable(axiom, measure, alpha, "needs a non-target node");
            };
            let Some(u) = random_non_target(&g, rng) else {
                return inapplicable(axiom, measure, alpha, "needs a non-target node");
            };
            let mut g2 = g.graph().clone();
            if g2.multiplicity(&v, g.target()) == 0 {
                g2.add_edges(&v, g.target(), 1).expect("nodes present");
            }
            if g2.multiplicity(&v, &u) == 0 {
                g2.add_edges(&v, &u, 1).expect("nodes present");
            }
            let planted = TargetedGraph::new(g2, g.target().clone(), g.weights().clone())
                .expect("added edges cannot break class");
            check_direct_link_domination(measure, alpha, &planted, &v, &u)
        }
        AxiomId::EdgeSwap => {
            let g = generate_graph(cfg, rng, "t", "");
            // Plant a fully symmetric pair: fresh v, u with identical
            // out-edges, identical in-edges and equal weight, so their
            // centralities agree exactly under every measure.
            let ends: Vec<&NodeId> = g.graph().nodes().collect();
            let w1 = ends[rng.gen_range(0..ends.len())].clone();
            let w2 = ends[rng.gen_range(0..ends.len())].clone();
            if w1 == w2 {
                return inapplicable(axiom, measure, alpha, "coinciding endpoints, trivial swap");
            }
            let mut g2 = g.graph().clone();
            let v = g2.fresh_node_id("x");
            g2.add_node(v.clone());
            let u = g2.fresh_node_id("x");
            g2.add_node(u.clone());
            for pair in [&v, &u] {
                g2.add_edges(pair, &w1, 1).expect("nodes present");
                g2.add_edges(pair, &w2, 1).expect("nodes present");
            }
            if rng.gen_bool(0.5) {
                let from = random_node(&g, rng);
                let m = rng.gen_range(1..=cfg.max_multiplicity.max(1));
                g2.add_edges(&from, &v, m).expect("nodes present");
                g2.add_edges(&from, &u, m).expect("nodes present");
            }
            let (lo, hi) = cfg.weight_range;
            let x = rng.gen_range(lo..=hi);
            let mut w = g.weights().clone();
            w.set(v.clone(), x).expect("lo >= 0");
            w.set(u.clone(), x).expect("lo >= 0");
            let planted = TargetedGraph::new(g2, g.target().clone(), w)
                .expect("pair feeds existing nodes");
            check_edge_swap(measure, alpha, &planted, (&v, &w1), (&u, &w2))
        }
        AxiomId::EdgeMultiplication => {
            let g = generate_graph(cfg, rng, "t", "");
            let v = random_node(&g, rng);
            let k = rng.gen_range(1..=3);
            check_edge_multiplication(measure, alpha, &g, &v, k)
        }
        AxiomId::Baseline11 | AxiomId::BaselineKK | AxiomId::Baseline1A => {
            let k = rng.gen_range(1..=10);
            check_baseline(measure, alpha, axiom, k)
        }
        AxiomId::Anonymity => {
            let g = generate_graph(cfg, rng, "t", "");
            let v = random_node(&g, rng);
            let fresh = g.graph().fresh_node_id("r");
            check_anonymity(measure, alpha, &g, &v, &fresh)
        }
        AxiomId::TargetSelfLoop => {
            let g = generate_graph(cfg, rng, "t", "");
            let mut g2 = g.graph().clone();
            g2.add_edges(g.target(), g.target(), 1).expect("target present");
            let planted = TargetedGraph::new(g2, g.target().clone(), g.weights().clone())
                .expect("loop cannot break class");
            check_target_self_loop(measure, alpha, &planted)
        }
        AxiomId::NoTargetOutlet => {
            let g = generate_graph(cfg, rng, "t", "");
            let Some(v) = random_non_target(&g, rng) else {
                return inapplicable(axiom, measure, alpha, "needs a non-target node");
            };
            let mut g2 = g.graph().clone();
            if g2.multiplicity(g.target(), &v) == 0 {
                g2.add_edges(g.target(), &v, 1).expect("nodes present");
            }
            let planted = TargetedGraph::new(g2, g.target().clone(), g.weights().clone())
                .expect("added edge cannot break class");
            check_no_target_outlet(measure, alpha, &planted, &v)
        }
        AxiomId::Siphon => {
            let g = generate_graph(cfg, rng, "t", "");
            let mut g2 = g.graph().clone();
            let v = g2.fresh_node_id("q");
            g2.add_node(v.clone());
            let targets: Vec<&NodeId> = g.graph().nodes().collect();
            for _ in 0..rng.gen_range(1..=2) {
                let to = targets[rng.gen_range(0..targets.len())];
                g2.add_edges(&v, to, 1).expect("nodes present");
            }
            let (lo, hi) = cfg.weight_range;
            let mut w = g.weights().clone();
            w.set(v.clone(), rng.gen_range(lo..=hi)).expect("lo >= 0");
            let planted = TargetedGraph::new(g2, g.target().clone(), w)
                .expect("new node feeds existing nodes");
            check_siphon(measure, alpha, &planted, &v)
        }
    }
}

fn trial_rng(seed: u64, axiom: AxiomId, measure: Measure, alpha: Option<f64>, trial: usize) -> ChaCha8Rng {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for p in [
        axiom as u64 + 1,
        measure as u64 + 1,
        alpha.map(f64::to_bits).unwrap_or(0),
        trial as u64,
    ] {
        h = (h ^ p).wrapping_mul(0x100_0000_01b3);
        h ^= h >> 29;
    }
    ChaCha8Rng::seed_from_u64(h)
}

// ---------------------------------------------------------------------------
// Counterexample search
// ---------------------------------------------------------------------------

/// Hand-picked small instances known to refute the expected-failing cells.
/// They are tried before any random search so refutations are deterministic.
fn known_instances(axiom: AxiomId, measure: Measure) -> Vec<CheckInstance> {
    let fig2 = serialize_graph(&fixtures::figure2());
    let fig3 = serialize_graph(&fixtures::figure3());
    match (axiom, measure) {
        (AxiomId::Symmetry, Measure::RandomWalkBetweenness | Measure::PageRank) => {
            vec![CheckInstance::Symmetry { g: fig2, s: "s".into() }]
        }
        (AxiomId::DirectLinkDomination, Measure::RandomWalkBetweenness | Measure::PageRank) => {
            vec![CheckInstance::DirectLinkDomination {
                g: fig2,
                v: "s".into(),
                u: "v".into(),
            }]
        }
        (AxiomId::EdgeSwap, Measure::Betweenness) => vec![CheckInstance::EdgeSwap {
            g: fig3,
            e1: ("s1".into(), "t".into()),
            e2: ("s2".into(), "v1".into()),
        }],
        (AxiomId::EdgeSwap, Measure::Stress) => {
            // Reweighted so both sources have equal stress before the swap.
            let g = build_graph(
                "t",
                &[("s1", 2.0), ("s2", 1.0)],
                &[
                    ("s1", "v1", 1),
                    ("s1", "t", 1),
                    ("s2", "v1", 1),
                    ("s2", "v2", 1),
                    ("v1", "t", 1),
                    ("v2", "t", 1),
                ],
            );
            vec![CheckInstance::EdgeSwap {
                g: serialize_graph(&g),
                e1: ("s1".into(), "t".into()),
                e2: ("s2".into(), "v1".into()),
            }]
        }
        (AxiomId::EdgeMultiplication, Measure::Stress) => {
            vec![CheckInstance::EdgeMultiplication {
                g: serialize_graph(&fixtures::baseline(1)),
                v: "s".into(),
                k: 1,
            }]
        }
        (AxiomId::EdgeMultiplication, Measure::Betweenness) => {
            let diamond = build_graph(
                "t",
                &[("s", 1.0)],
                &[("s", "v", 1), ("v", "t", 1), ("s", "w", 1), ("w", "t", 1)],
            );
            vec![CheckInstance::EdgeMultiplication {
                g: serialize_graph(&diamond),
                v: "v".into(),
                k: 1,
            }]
        }
        _ => Vec::new(),
    }
}

/// Exhaustive sweep over graphs with at most 4 nodes and total edge
/// multiplicity at most 6, unit indicator weights. Only the single-graph
/// transformation axioms participate; the expected-failing matrix cells
/// all fall in these rows.
fn exhaustive_search(axiom: AxiomId, measure: Measure, alpha: Option<f64>) -> Option<Witness> {
    const MAX_TOTAL_MULT: u64 = 6;
    let ids = [node("t"), node("v1"), node("v2"), node("v3")];
    for n in 1..=4usize {
        let nodes = &ids[..n];
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .collect();
        let mut mults = vec![0u64; pairs.len()];
        if let Some(w) = assign_mults(
            axiom, measure, alpha, nodes, &pairs, &mut mults, 0, MAX_TOTAL_MULT,
        ) {
            return Some(w);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn assign_mults(
    axiom: AxiomId,
    measure: Measure,
    alpha: Option<f64>,
    nodes: &[NodeId],
    pairs: &[(usize, usize)],
    mults: &mut Vec<u64>,
    idx: usize,
    remaining: u64,
) -> Option<Witness> {
    if idx == pairs.len() {
        let mut g = MultiDigraph::new();
        for v in nodes {
            g.add_node(v.clone());
        }
        for (slot, &(a, b)) in pairs.iter().enumerate() {
            if mults[slot] > 0 {
                g.add_edges(&nodes[a], &nodes[b], mults[slot]).ok()?;
            }
        }
        for s in nodes {
            let tg = TargetedGraph::new(
                g.clone(),
                nodes[0].clone(),
                WeightVector::indicator(s, 1.0),
            );
            let Ok(tg) = tg else { continue };
            if let Some(w) = refute_on_graph(axiom, measure, alpha, &tg) {
                return Some(w);
            }
        }
        return None;
    }
    for m in 0..=remaining {
        mults[idx] = m;
        if let Some(w) = assign_mults(
            axiom, measure, alpha, nodes, pairs, mults, idx + 1, remaining - m,
        ) {
            return Some(w);
        }
    }
    mults[idx] = 0;
    None
}

/// Tries every instantiation of a single-graph axiom on one graph.
fn refute_on_graph(
    axiom: AxiomId,
    measure: Measure,
    alpha: Option<f64>,
    g: &TargetedGraph,
) -> Option<Witness> {
    let nodes: Vec<NodeId> = g.graph().nodes().cloned().collect();
    let mut results = Vec::new();
    match axiom {
        AxiomId::Symmetry => {
            for s in &nodes {
                results.push(check_symmetry(measure, alpha, g, s));
            }
        }
        AxiomId::DirectLinkDomination => {
            for v in &nodes {
                for u in &nodes {
                    results.push(check_direct_link_domination(measure, alpha, g, v, u));
                }
            }
        }
        AxiomId::EdgeSwap => {
            let edges: Vec<(NodeId, NodeId)> = g
                .graph()
                .edges()
                .map(|(a, b, _)| (a.clone(), b.clone()))
                .collect();
            for e1 in &edges {
                for e2 in &edges {
                    results.push(check_edge_swap(
                        measure,
                        alpha,
                        g,
                        (&e1.0, &e1.1),
                        (&e2.0, &e2.1),
                    ));
                }
            }
        }
        AxiomId::EdgeMultiplication => {
            for v in &nodes {
                for k in 1..=2 {
                    results.push(check_edge_multiplication(measure, alpha, g, v, k));
                }
            }
        }
        _ => {}
    }
    results
        .into_iter()
        .find(|r| r.verdict == Verdict::Violated)
        .and_then(|r| r.witness)
}

/// Staged counterexample search: known shapes, then random trials, then
/// (optionally) the exhaustive small sweep.
pub fn find_counterexample(
    axiom: AxiomId,
    measure: Measure,
    alpha: Option<f64>,
    cfg: &GraphGenConfig,
    exhaustive: bool,
) -> Option<Witness> {
    for instance in known_instances(axiom, measure) {
        let res = replay(measure, alpha, &instance).expect("known instances parse");
        if res.verdict == Verdict::Violated {
            return res.witness;
        }
    }
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, axiom, measure, alpha, trial);
        let res = run_trial(axiom, measure, alpha, cfg, &mut rng);
        if res.verdict == Verdict::Violated {
            return res.witness;
        }
    }
    if exhaustive {
        return exhaustive_search(axiom, measure, alpha);
    }
    None
}

// ---------------------------------------------------------------------------
// The satisfaction matrix
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct MatrixConfig {
    pub gen: GraphGenConfig,
    /// Decay factors at which PageRank cells are evaluated.
    pub alphas: Vec<f64>,
    /// Whether expected-failing cells may fall back to the exhaustive sweep.
    pub exhaustive: bool,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        MatrixConfig {
            gen: GraphGenConfig::default(),
            alphas: vec![0.25, 0.5, 0.85],
            exhaustive: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub axiom: AxiomId,
    pub measure: Measure,
    pub expected_satisfied: bool,
    /// None when the cell could not be decided (no applicable trials, or
    /// the counterexample search was exhausted).
    pub satisfied: Option<bool>,
    pub trials_run: usize,
    pub applicable_trials: usize,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl CellReport {
    pub fn matches_expected(&self) -> bool {
        self.satisfied == Some(self.expected_satisfied)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BaselineCell {
    pub measure: Measure,
    pub expected_variant: AxiomId,
    /// Variants holding for every k in 1..=10 (and every decay for
    /// PageRank). A correct measure matches exactly one.
    pub satisfied_variants: Vec<AxiomId>,
}

impl BaselineCell {
    pub fn matches_expected(&self) -> bool {
        self.satisfied_variants == vec![self.expected_variant]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixReport {
    pub cells: Vec<CellReport>,
    pub baseline: Vec<BaselineCell>,
    pub matches_expected: bool,
}

impl MatrixReport {
    pub fn cell(&self, axiom: AxiomId, measure: Measure) -> Option<&CellReport> {
        self.cells
            .iter()
            .find(|c| c.axiom == axiom && c.measure == measure)
    }
}

fn cell_alphas(measure: Measure, cfg: &MatrixConfig) -> Vec<Option<f64>> {
    if measure == Measure::PageRank {
        cfg.alphas.iter().copied().map(Some).collect()
    } else {
        vec![None]
    }
}

fn run_cell(axiom: AxiomId, measure: Measure, cfg: &MatrixConfig) -> CellReport {
    let expected = expected_satisfied(axiom, measure);
    let alphas = cell_alphas(measure, cfg);
    let mut trials_run = 0;
    let mut applicable = 0;
    if expected {
        for &alpha in &alphas {
            for trial in 0..cfg.gen.trials {
                let mut rng = trial_rng(cfg.gen.seed, axiom, measure, alpha, trial);
                let res = run_trial(axiom, measure, alpha, &cfg.gen, &mut rng);
                trials_run += 1;
                match res.verdict {
                    Verdict::Holds => applicable += 1,
                    Verdict::Inapplicable => {}
                    Verdict::Violated => {
                        return CellReport {
                            axiom,
                            measure,
                            expected_satisfied: expected,
                            satisfied: Some(false),
                            trials_run,
                            applicable_trials: applicable,
                            witness: res.witness,
                            note: None,
                        }
                    }
                }
            }
        }
        CellReport {
            axiom,
            measure,
            expected_satisfied: expected,
            satisfied: (applicable > 0).then_some(true),
            trials_run,
            applicable_trials: applicable,
            witness: None,
            note: (applicable == 0).then(|| "no applicable trials".to_string()),
        }
    } else {
        for &alpha in &alphas {
            if let Some(witness) =
                find_counterexample(axiom, measure, alpha, &cfg.gen, cfg.exhaustive)
            {
                return CellReport {
                    axiom,
                    measure,
                    expected_satisfied: expected,
                    satisfied: Some(false),
                    trials_run,
                    applicable_trials: applicable,
                    witness: Some(witness),
                    note: None,
                };
            }
        }
        CellReport {
            axiom,
            measure,
            expected_satisfied: expected,
            satisfied: None,
            trials_run,
            applicable_trials: applicable,
            witness: None,
            note: Some("counterexample search exhausted".to_string()),
        }
    }
}

fn run_baseline_cell(measure: Measure, cfg: &MatrixConfig) -> BaselineCell {
    let alphas = cell_alphas(measure, cfg);
    let satisfied_variants = BASELINE_VARIANTS
        .iter()
        .copied()
        .filter(|&variant| {
            alphas.iter().all(|&alpha| {
                (1..=10).all(|k| {
                    check_baseline(measure, alpha, variant, k).verdict == Verdict::Holds
                })
            })
        })
        .collect();
    BaselineCell {
        measure,
        expected_variant: expected_baseline_variant(measure),
        satisfied_variants,
    }
}

/// Runs the full axiom-by-measure satisfaction matrix.
pub fn run_matrix(cfg: &MatrixConfig) -> MatrixReport {
    let cells: Vec<CellReport> = MATRIX_AXIOMS
        .iter()
        .flat_map(|&axiom| {
            Measure::ALL
                .iter()
                .map(move |&measure| run_cell(axiom, measure, cfg))
        })
        .collect();
    let baseline: Vec<BaselineCell> = Measure::ALL
        .iter()
        .map(|&m| run_baseline_cell(m, cfg))
        .collect();
    let matches_expected = cells.iter().all(CellReport::matches_expected)
        && baseline.iter().all(BaselineCell::matches_expected);
    MatrixReport {
        cells,
        baseline,
        matches_expected,
    }
}

fn baseline_label(variant: AxiomId) -> &'static str {
    match variant {
        AxiomId::Baseline11 => "1-1",
        AxiomId::BaselineKK => "k-k",
        AxiomId::Baseline1A => "1-a",
        _ => "?",
    }
}

/// Plain-text rendering of the matrix. Mismatches against the expected
/// pattern are flagged with `!`.
pub fn render_matrix(report: &MatrixReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<24}", "axiom"));
    for m in Measure::ALL {
        out.push_str(&format!("{:>14}", m.name()));
    }
    out.push('\n');
    for &axiom in &MATRIX_AXIOMS {
        out.push_str(&format!("{:<24}", axiom.name()));
        for m in Measure::ALL {
            let cell = report.cell(axiom, m).expect("every cell present");
            let label = match cell.satisfied {
                Some(true) => "sat",
                Some(false) => "viol",
                None => "??",
            };
            let flag = if cell.matches_expected() { "" } else { "!" };
            out.push_str(&format!("{:>14}", format!("{label}{flag}")));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:<24}", "baseline"));
    for cell in &report.baseline {
        let label = match cell.satisfied_variants.as_slice() {
            [one] => baseline_label(*one).to_string(),
            [] => "??".to_string(),
            many => many.iter().map(|v| baseline_label(*v)).collect::<Vec<_>>().join("/"),
        };
        let flag = if cell.matches_expected() { "" } else { "!" };
        out.push_str(&format!("{:>14}", format!("{label}{flag}")));
    }
    out.push('\n');
    out.push_str(&format!(
        "matrix matches expected: {}\n",
        report.matches_expected
    ));
    out
}

/// Runs the derived-lemma suite: `trials` random instances per lemma and
/// measure. Returns every violated result (empty means the suite passed)
/// together with the number of applicable instances per lemma.
pub fn run_lemmas(cfg: &MatrixConfig) -> (Vec<AxiomCheckResult>, BTreeMap<AxiomId, usize>) {
    let mut violations = Vec::new();
    let mut applicable: BTreeMap<AxiomId, usize> = BTreeMap::new();
    for &lemma in &LEMMAS {
        for measure in Measure::ALL {
            for alpha in cell_alphas(measure, cfg) {
                for trial in 0..cfg.gen.trials {
                    let mut rng = trial_rng(cfg.gen.seed, lemma, measure, alpha, trial);
                    let res = run_trial(lemma, measure, alpha, &cfg.gen, &mut rng);
                    match res.verdict {
                        Verdict::Holds => *applicable.entry(lemma).or_insert(0) += 1,
                        Verdict::Violated => violations.push(res),
                        Verdict::Inapplicable => {}
                    }
                }
            }
        }
    }
    (violations, applicable)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg() -> GraphGenConfig {
        GraphGenConfig {
            trials: 25,
            max_nodes: 6,
            ..GraphGenConfig::default()
        }
    }

    #[test]
    fn generator_stays_in_class() {
        let cfg = GraphGenConfig::default();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = generate_graph(&cfg, &mut rng, "t", "");
            assert!(g.validate_class());
            assert!(g.weights().total() > 0.0);
            assert!(g.graph().node_count() <= cfg.max_nodes);
        }
    }

    #[test]
    fn symmetry_holds_for_path_measures_on_figure2() {
        let g = fixtures::figure2();
        for m in [Measure::Stress, Measure::Betweenness] {
            let res = check_symmetry(m, None, &g, &node("s"));
            assert_eq!(res.verdict, Verdict::Holds, "{m:?}: {:?}", res.witness);
        }
    }

    #[test]
    fn symmetry_fails_for_walk_measures_on_figure2() {
        let g = fixtures::figure2();
        let res = check_symmetry(Measure::RandomWalkBetweenness, None, &g, &node("s"));
        assert_eq!(res.verdict, Verdict::Violated);
        // Reversed values: t gets 4/3 against 1, v gets 2/3 against 1/2;
        // the witness carries the larger gap.
        let w = res.witness.unwrap();
        assert_eq!(w.node, "t");
        assert!((w.lhs - 4.0 / 3.0).abs() <= 1e-12);
        assert!((w.rhs - 1.0).abs() <= 1e-12);
        let res = check_symmetry(Measure::PageRank, Some(0.5), &g, &node("s"));
        assert_eq!(res.verdict, Verdict::Violated);
    }

    #[test]
    fn direct_link_domination_split_verdicts() {
        let g = fixtures::figure2();
        for m in [Measure::Stress, Measure::Betweenness] {
            let res = check_direct_link_domination(m, None, &g, &node("s"), &node("v"));
            assert_eq!(res.verdict, Verdict::Holds);
        }
        let res = check_direct_link_domination(
            Measure::RandomWalkBetweenness,
            None,
            &g,
            &node("s"),
            &node("v"),
        );
        assert_eq!(res.verdict, Verdict::Violated);
    }

    #[test]
    fn edge_swap_refutes_path_measures() {
        for m in [Measure::Stress, Measure::Betweenness] {
            let w = find_counterexample(AxiomId::EdgeSwap, m, None, &quick_cfg(), false)
                .expect("known shape refutes");
            let g = parse_graph(match &w.instance {
                CheckInstance::EdgeSwap { g, .. } => g,
                other => panic!("unexpected instance {other:?}"),
            })
            .unwrap();
            assert!(g.graph().node_count() <= 6);
            // The witness must replay to the same violation.
            let replayed = replay(m, None, &w.instance).unwrap();
            assert_eq!(replayed.verdict, Verdict::Violated);
        }
    }

    #[test]
    fn edge_multiplication_refutes_path_measures() {
        for m in [Measure::Stress, Measure::Betweenness] {
            let w = find_counterexample(AxiomId::EdgeMultiplication, m, None, &quick_cfg(), false)
                .expect("known shape refutes");
            assert!(replay(m, None, &w.instance).unwrap().verdict == Verdict::Violated);
        }
    }

    #[test]
    fn baseline_variants_match_expected() {
        let cfg = MatrixConfig::default();
        for m in Measure::ALL {
            let cell = run_baseline_cell(m, &cfg);
            assert!(
                cell.matches_expected(),
                "{m:?} satisfied {:?}",
                cell.satisfied_variants
            );
        }
    }

    #[test]
    fn locality_on_disjoint_baselines() {
        let g1 = build_graph("t", &[("a1", 1.0)], &[("a1", "t", 1)]);
        let g2 = build_graph("t", &[("b1", 2.0)], &[("b1", "t", 2)]);
        for m in Measure::ALL {
            let alpha = (m == Measure::PageRank).then_some(0.5);
            let res = check_locality(m, alpha, &g1, &g2);
            assert_eq!(res.verdict, Verdict::Holds, "{m:?}: {:?}", res.witness);
        }
    }

    #[test]
    fn locality_rejects_overlap() {
        let g = fixtures::figure2();
        let res = check_locality(Measure::Stress, None, &g, &g);
        assert_eq!(res.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn target_proxy_chain() {
        // s -> v -> t with proxy v.
        let g = build_graph("t", &[("s", 1.0)], &[("s", "v", 1), ("v", "t", 1)]);
        for m in Measure::ALL {
            let alpha = (m == Measure::PageRank).then_some(0.85);
            let res = check_target_proxy(m, alpha, &g, &node("v"));
            assert_eq!(res.verdict, Verdict::Holds, "{m:?}: {:?}", res.witness);
        }
    }

    #[test]
    fn node_redirect_on_figure1_twins() {
        let g = fixtures::figure1();
        for m in Measure::ALL {
            let alpha = (m == Measure::PageRank).then_some(0.5);
            let res = check_node_redirect(m, alpha, &g, &node("v1"), &node("v2"));
            assert_eq!(res.verdict, Verdict::Holds, "{m:?}: {:?}", res.witness);
        }
    }

    #[test]
    fn siphon_inapplicable_for_stress() {
        let g = fixtures::figure3();
        let res = check_siphon(Measure::Stress, None, &g, &node("s1"));
        assert_eq!(res.verdict, Verdict::Inapplicable);
        let res = check_siphon(Measure::Betweenness, None, &g, &node("s1"));
        assert_eq!(res.verdict, Verdict::Holds);
    }

    #[test]
    fn witness_serialization_round_trip() {
        let w = find_counterexample(
            AxiomId::Symmetry,
            Measure::RandomWalkBetweenness,
            None,
            &quick_cfg(),
            false,
        )
        .unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: Witness = serde_json::from_str(&json).unwrap();
        let res = replay(back.measure, back.alpha, &back.instance).unwrap();
        assert_eq!(res.verdict, Verdict::Violated);
        assert!((res.witness.unwrap().delta - w.delta).abs() <= 1e-12);
    }

    #[test]
    fn expected_table_shape() {
        assert!(expected_satisfied(AxiomId::Locality, Measure::PageRank));
        assert!(expected_satisfied(AxiomId::Symmetry, Measure::Stress));
        assert!(!expected_satisfied(AxiomId::Symmetry, Measure::PageRank));
        assert!(!expected_satisfied(AxiomId::EdgeSwap, Measure::Stress));
        assert!(expected_satisfied(AxiomId::EdgeSwap, Measure::RandomWalkBetweenness));
    }

    #[test]
    fn run_trial_smoke_all_axioms() {
        let cfg = quick_cfg();
        for axiom in MATRIX_AXIOMS.into_iter().chain(LEMMAS) {
            for measure in Measure::ALL {
                let alpha = (measure == Measure::PageRank).then_some(0.5);
                let expected = expected_satisfied(axiom, measure);
                for trial in 0..10 {
                    let mut rng = trial_rng(cfg.seed, axiom, measure, alpha, trial);
                    let res = run_trial(axiom, measure, alpha, &cfg, &mut rng);
                    if expected {
                        assert_ne!(
                            res.verdict,
                            Verdict::Violated,
                            "{axiom:?} x {measure:?} trial {trial}: {:?}",
                            res.witness
                        );
                    }
                }
            }
        }
    }
}
