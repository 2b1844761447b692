//! Independent brute-force reference implementations.
//!
//! Everything here recomputes the measures from first principles — explicit
//! path enumeration, truncated walk series, Monte-Carlo sampling, exact
//! rational arithmetic — without touching the analytic code paths in
//! [`crate::centrality`] or the layered σ counting in [`crate::graph`].
//! The analytic module is accepted only where it agrees with these.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{NodeId, TargetedGraph};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration budget exceeded ({0})")]
    BudgetExceeded(String),
}

/// Limits for the brute-force procedures.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub max_path_length: usize,
    pub max_paths: usize,
    /// Per-walk step cap for Monte Carlo. Hitting it on a class-valid graph
    /// at a = 1 is an anomaly (absorption is almost sure) and is reported.
    pub step_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_path_length: 32,
            max_paths: 2_000_000,
            step_cap: 1_000_000,
        }
    }
}

/// One edge occurrence inside an enumerated path. `copy` distinguishes
/// parallel copies of the same pair and is always below the multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCopy {
    pub from: NodeId,
    pub to: NodeId,
    pub copy: u64,
}

pub type EnumeratedPath = Vec<EdgeCopy>;

#[derive(Debug, Clone)]
pub struct PathEnumeration {
    pub sigma_total: BigUint,
    /// Paths containing the node anywhere, endpoints included.
    pub sigma_through: BTreeMap<NodeId, BigUint>,
    pub paths: Vec<EnumeratedPath>,
}

/// Exhaustively enumerates the shortest s→t paths as edge sequences, with
/// parallel copies distinct. Finds the minimal length by iterative
/// deepening, so it shares no machinery with the BFS-layered counts.
pub fn enumerate_shortest_paths(
    g: &TargetedGraph,
    s: &NodeId,
    cfg: &OracleConfig,
) -> Result<PathEnumeration, OracleError> {
    let t = g.target();
    let mut paths = Vec::new();
    for length in 0..=cfg.max_path_length {
        collect_paths(g, s, t, length, &mut Vec::new(), &mut paths, cfg)?;
        if !paths.is_empty() {
            break;
        }
    }
    if paths.is_empty() {
        return Err(OracleError::BudgetExceeded(format!(
            "no path of length <= {} from {s}",
            cfg.max_path_length
        )));
    }

    let mut sigma_through: BTreeMap<NodeId, BigUint> = g
        .graph()
        .nodes()
        .map(|v| (v.clone(), BigUint::zero()))
        .collect();
    for path in &paths {
        let mut touched: Vec<&NodeId> = vec![s];
        for e in path {
            touched.push(&e.to);
        }
        touched.sort();
        touched.dedup();
        for v in touched {
            let slot = sigma_through.get_mut(v).expect("path stays in graph");
            *slot += BigUint::one();
        }
    }
    Ok(PathEnumeration {
        sigma_total: BigUint::from(paths.len()),
        sigma_through,
        paths,
    })
}

fn collect_paths(
    g: &TargetedGraph,
    at: &NodeId,
    t: &NodeId,
    remaining: usize,
    prefix: &mut EnumeratedPath,
    out: &mut Vec<EnumeratedPath>,
    cfg: &OracleConfig,
) -> Result<(), OracleError> {
    if remaining == 0 {
        if at == t {
            if out.len() >= cfg.max_paths {
                return Err(OracleError::BudgetExceeded(format!(
                    "more than {} shortest paths",
                    cfg.max_paths
                )));
            }
            out.push(prefix.clone());
        }
        return Ok(());
    }
    let successors: Vec<(NodeId, u64)> = g
        .graph()
        .out_edges(at)
        .map(|(w, m)| (w.clone(), m))
        .collect();
    for (w, m) in successors {
        for copy in 0..m {
            prefix.push(EdgeCopy {
                from: at.clone(),
                to: w.clone(),
                copy,
            });
            collect_paths(g, &w, t, remaining - 1, prefix, out, cfg)?;
            prefix.pop();
        }
    }
    Ok(())
}

/// Partial sums Σ_{k≤K} aᵏ·(step operator)ᵏ b of the decayed-walk visit
/// series on G − Γ⁺_t. Mass reaching the target is retained (absorption).
pub fn truncated_series_visits(g: &TargetedGraph, a: f64, steps: usize) -> BTreeMap<NodeId, f64> {
    let t = g.target();
    let mut mass: BTreeMap<NodeId, f64> = g
        .graph()
        .nodes()
        .map(|v| (v.clone(), g.weights().get(v)))
        .collect();
    let mut total = mass.clone();
    for _ in 0..steps {
        let mut next: BTreeMap<NodeId, f64> =
            g.graph().nodes().map(|v| (v.clone(), 0.0)).collect();
        for r in g.graph().nodes() {
            if r == t {
                continue;
            }
            let m_r = mass[r];
            if m_r == 0.0 {
                continue;
            }
            let outdeg = g.graph().out_degree(r) as f64;
            for (w, m) in g.graph().out_edges(r) {
                *next.get_mut(w).unwrap() += a * m_r * m as f64 / outdeg;
            }
        }
        for (v, x) in &next {
            *total.get_mut(v).unwrap() += x;
        }
        mass = next;
    }
    total
}

/// Tail bound aᴷ⁺¹·Σb/(1−a) for the truncated series, valid for a < 1.
pub fn series_tail_bound(a: f64, steps: usize, total_weight: f64) -> f64 {
    a.powi(steps as i32 + 1) * total_weight / (1.0 - a)
}

#[derive(Debug, Clone)]
pub struct MonteCarloEstimate {
    pub values: BTreeMap<NodeId, f64>,
    pub std_errors: BTreeMap<NodeId, f64>,
    /// Set when some walk hit the step cap before terminating.
    pub step_cap_hit: bool,
}

/// Simulates decayed random walks from every weighted source on G − Γ⁺_t.
/// Each step picks an outgoing edge with probability proportional to its
/// multiplicity and continues with probability a.
pub fn monte_carlo_visits(
    g: &TargetedGraph,
    a: f64,
    samples: usize,
    seed: u64,
    cfg: &OracleConfig,
) -> MonteCarloEstimate {
    let t = g.target();
    let nodes: Vec<NodeId> = g.graph().nodes().cloned().collect();
    let mut values: BTreeMap<NodeId, f64> =
        nodes.iter().map(|v| (v.clone(), 0.0)).collect();
    let mut variances: BTreeMap<NodeId, f64> =
        nodes.iter().map(|v| (v.clone(), 0.0)).collect();
    let mut step_cap_hit = false;

    // Transition tables once per graph; the walk lives on G minus the
    // target's out-edges.
    let transitions: BTreeMap<&NodeId, (Vec<&NodeId>, WeightedIndex<u64>)> = nodes
        .iter()
        .filter(|v| *v != t)
        .map(|v| {
            let succ: Vec<&NodeId> = g.graph().out_edges(v).map(|(w, _)| w).collect();
            let weights: Vec<u64> = g.graph().out_edges(v).map(|(_, m)| m).collect();
            (v, (succ, WeightedIndex::new(weights).expect("outdeg > 0")))
        })
        .collect();

    for (source, weight) in g.weights().support() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_id(source));
        let mut sums: BTreeMap<&NodeId, f64> = nodes.iter().map(|v| (v, 0.0)).collect();
        let mut sumsq: BTreeMap<&NodeId, f64> = nodes.iter().map(|v| (v, 0.0)).collect();
        let mut visits: BTreeMap<&NodeId, u64> = BTreeMap::new();
        for _ in 0..samples {
            visits.clear();
            let mut at = source;
            let mut steps = 0usize;
            loop {
                *visits.entry(at).or_insert(0) += 1;
                if at == t {
                    break;
                }
                if a < 1.0 && !rng.gen_bool(a) {
                    break;
                }
                if steps >= cfg.step_cap {
                    step_cap_hit = true;
                    break;
                }
                let (succ, dist) = &transitions[at];
                at = succ[dist.sample(&mut rng)];
                steps += 1;
            }
            for (v, count) in &visits {
                let c = *count as f64;
                *sums.get_mut(*v).unwrap() += c;
                *sumsq.get_mut(*v).unwrap() += c * c;
            }
        }
        let n = samples as f64;
        for v in &nodes {
            let mean = sums[v] / n;
            let var = (sumsq[v] / n - mean * mean).max(0.0);
            *values.get_mut(v).unwrap() += weight * mean;
            *variances.get_mut(v).unwrap() += weight * weight * var / n;
        }
    }

    let std_errors = variances
        .into_iter()
        .map(|(v, var)| (v, var.sqrt()))
        .collect();
    MonteCarloEstimate {
        values,
        std_errors,
        step_cap_hit,
    }
}

fn hash_id(v: &NodeId) -> u64 {
    // FNV-1a over the id bytes; keeps per-source streams independent and
    // deterministic.
    let mut h = 0xcbf29ce484222325u64;
    for b in v.as_str().bytes() {
        h = (h ^ b as u64).wrapping_mul(0x100000001b3);
    }
    h
}

/// t-Betweenness in exact rational arithmetic, counts from explicit path
/// enumeration. Certifies the floating implementation.
pub fn exact_rational_betweenness(
    g: &TargetedGraph,
    cfg: &OracleConfig,
) -> Result<BTreeMap<NodeId, BigRational>, OracleError> {
    let mut values: BTreeMap<NodeId, BigRational> = g
        .graph()
        .nodes()
        .map(|v| (v.clone(), BigRational::zero()))
        .collect();
    for (s, weight) in g.weights().support() {
        let rational_weight =
            BigRational::from_float(weight).expect("finite weight");
        let en = enumerate_shortest_paths(g, s, cfg)?;
        let total = BigRational::from_integer(en.sigma_total.clone().into());
        for (v, through) in &en.sigma_through {
            if through.is_zero() {
                continue;
            }
            let ratio = BigRational::from_integer(through.clone().into()) / total.clone();
            let slot = values.get_mut(v).unwrap();
            *slot += rational_weight.clone() * ratio;
        }
    }
    Ok(values)
}

/// Same, as f64 for direct comparison.
pub fn exact_rational_betweenness_f64(
    g: &TargetedGraph,
    cfg: &OracleConfig,
) -> Result<BTreeMap<NodeId, f64>, OracleError> {
    Ok(exact_rational_betweenness(g, cfg)?
        .into_iter()
        .map(|(v, x)| (v, x.to_f64().expect("finite value")))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::node;

    #[test]
    fn enumerate_baseline_k3() {
        let en =
            enumerate_shortest_paths(&fixtures::baseline(3), &node("s"), &OracleConfig::default())
                .unwrap();
        assert_eq!(en.sigma_total, BigUint::from(3u32));
        assert_eq!(en.paths.len(), 3);
        for p in &en.paths {
            assert_eq!(p.len(), 1);
        }
        let copies: Vec<u64> = en.paths.iter().map(|p| p[0].copy).collect();
        assert_eq!(copies, vec![0, 1, 2]);
    }

    #[test]
    fn enumerate_figure1_from_s2() {
        let en =
            enumerate_shortest_paths(&fixtures::figure1(), &node("s2"), &OracleConfig::default())
                .unwrap();
        assert_eq!(en.sigma_total, BigUint::from(2u32));
        assert_eq!(en.sigma_through[&node("v2")], BigUint::from(2u32));
        assert_eq!(en.sigma_through[&node("v1")], BigUint::zero());
    }

    #[test]
    fn enumerate_from_target_is_empty_path() {
        let en =
            enumerate_shortest_paths(&fixtures::figure2(), &node("t"), &OracleConfig::default())
                .unwrap();
        assert_eq!(en.sigma_total, BigUint::one());
        assert_eq!(en.paths, vec![Vec::new()]);
        assert_eq!(en.sigma_through[&node("t")], BigUint::one());
        assert_eq!(en.sigma_through[&node("v")], BigUint::zero());
    }

    #[test]
    fn series_zero_steps_is_weights() {
        let g = fixtures::figure3();
        let total = truncated_series_visits(&g, 0.7, 0);
        for v in ["s1", "s2", "v1", "v2", "t"] {
            assert_eq!(total[&node(v)], g.weights().get(&node(v)));
        }
    }

    #[test]
    fn series_baseline_absorbs_in_one_step() {
        let total = truncated_series_visits(&fixtures::baseline(1), 0.85, 5);
        assert!((total[&node("s")] - 1.0).abs() < 1e-15);
        assert!((total[&node("t")] - 0.85).abs() < 1e-15);
    }

    #[test]
    fn series_figure3_terminates_on_dag() {
        let total = truncated_series_visits(&fixtures::figure3(), 1.0, 3);
        let expect = [("s1", 1.0), ("s2", 1.0), ("v1", 1.0), ("v2", 0.5), ("t", 2.0)];
        for (v, want) in expect {
            assert!((total[&node(v)] - want).abs() < 1e-15);
        }
    }

    #[test]
    fn series_monotone_in_steps() {
        let g = fixtures::figure2();
        let mut prev = truncated_series_visits(&g, 0.9, 0);
        for k in 1..20 {
            let cur = truncated_series_visits(&g, 0.9, k);
            for (v, x) in &cur {
                assert!(*x + 1e-15 >= prev[v]);
            }
            prev = cur;
        }
    }

    #[test]
    fn monte_carlo_decay_zero_is_weights() {
        let g = fixtures::figure3();
        let est = monte_carlo_visits(&g, 0.0, 500, 7, &OracleConfig::default());
        for v in ["s1", "s2", "v1", "v2", "t"] {
            assert_eq!(est.values[&node(v)], g.weights().get(&node(v)));
        }
        assert!(!est.step_cap_hit);
    }

    #[test]
    fn monte_carlo_baseline_deterministic_walk() {
        let est = monte_carlo_visits(&fixtures::baseline(2), 1.0, 2000, 1, &OracleConfig::default());
        assert_eq!(est.values[&node("t")], 1.0);
        assert_eq!(est.std_errors[&node("t")], 0.0);
    }

    #[test]
    fn monte_carlo_figure2_within_three_sigma() {
        let est =
            monte_carlo_visits(&fixtures::figure2(), 1.0, 100_000, 42, &OracleConfig::default());
        let v = est.values[&node("v")];
        let se = est.std_errors[&node("v")].max(1e-9);
        assert!((v - 0.5).abs() <= 3.0 * se, "v = {v}, se = {se}");
    }

    #[test]
    fn monte_carlo_same_seed_identical() {
        let g = fixtures::figure2();
        let a = monte_carlo_visits(&g, 0.9, 1000, 5, &OracleConfig::default());
        let b = monte_carlo_visits(&g, 0.9, 1000, 5, &OracleConfig::default());
        assert_eq!(a.values, b.values);
    }

    #[test]
    fn rational_betweenness_figure1_exact() {
        let vals =
            exact_rational_betweenness(&fixtures::figure1(), &OracleConfig::default()).unwrap();
        let expect = [("s1", 1), ("s2", 2), ("v1", 1), ("v2", 2), ("v3", 3)];
        for (v, want) in expect {
            assert_eq!(vals[&node(v)], BigRational::from_integer(want.into()));
        }
    }

    #[test]
    fn rational_betweenness_thirds_no_rounding() {
        // sigma_total = 3, one path through v: exactly 1/3.
        let g = crate::graph::build_graph(
            "t",
            &[("s", 1.0)],
            &[("s", "v", 1), ("s", "t", 0), ("v", "t", 1), ("s", "w", 2), ("w", "t", 1)],
        );
        let vals = exact_rational_betweenness(&g, &OracleConfig::default()).unwrap();
        assert_eq!(
            vals[&node("v")],
            BigRational::new(1.into(), 3.into())
        );
    }
}
