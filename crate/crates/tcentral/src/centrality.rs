//! The four target-oriented medial centrality measures.
//!
//! Stress and betweenness are exact-in-spirit sums over shortest-path
//! counts. The random-walk measures are the solution of the fixed-point
//! system x = b + a·Mᵀx on the graph with the target's outgoing edges
//! removed, solved by direct elimination with partial pivoting; for a = 1
//! the non-target block is substochastic with spectral radius < 1 (every
//! node reaches the target), so the system is uniquely solvable.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::{NodeId, TargetedGraph};

#[derive(Debug, Error)]
pub enum CentralityError {
    #[error("decay factor {0} outside [0, 1)")]
    InvalidDecay(f64),
    #[error("decay factor {0} outside [0, 1]")]
    DecayOutOfRange(f64),
    #[error("internal error: visit system is singular")]
    SingularSystem,
}

/// Which measure a centrality vector came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Measure {
    Stress,
    Betweenness,
    RandomWalkBetweenness,
    PageRank,
}

impl Measure {
    pub const ALL: [Measure; 4] = [
        Measure::Stress,
        Measure::Betweenness,
        Measure::RandomWalkBetweenness,
        Measure::PageRank,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Measure::Stress => "stress",
            Measure::Betweenness => "betweenness",
            Measure::RandomWalkBetweenness => "rwb",
            Measure::PageRank => "pagerank",
        }
    }

    pub fn parse(s: &str) -> Option<Measure> {
        match s {
            "stress" => Some(Measure::Stress),
            "betweenness" => Some(Measure::Betweenness),
            "rwb" => Some(Measure::RandomWalkBetweenness),
            "pagerank" => Some(Measure::PageRank),
            _ => None,
        }
    }
}

/// Decay factor a ∈ [0, 1]. The public PageRank entry point additionally
/// enforces a < 1; a = 1 realizes random-walk betweenness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFactor(f64);

impl DecayFactor {
    pub fn new(a: f64) -> Result<Self, CentralityError> {
        if (0.0..=1.0).contains(&a) {
            Ok(DecayFactor(a))
        } else {
            Err(CentralityError::DecayOutOfRange(a))
        }
    }

    /// Strict PageRank range [0, 1).
    pub fn pagerank(a: f64) -> Result<Self, CentralityError> {
        if (0.0..1.0).contains(&a) {
            Ok(DecayFactor(a))
        } else {
            Err(CentralityError::InvalidDecay(a))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Non-negative value per node, tagged with the producing measure.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub alpha: Option<f64>,
    values: BTreeMap<NodeId, f64>,
}

impl CentralityVector {
    fn new(measure: Measure, alpha: Option<f64>, values: BTreeMap<NodeId, f64>) -> Self {
        debug_assert!(values.values().all(|v| *v >= 0.0));
        CentralityVector {
            measure,
            alpha,
            values,
        }
    }

    pub fn get(&self, v: &NodeId) -> f64 {
        self.values.get(v).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, f64)> {
        self.values.iter().map(|(v, &x)| (v, x))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest absolute per-node difference against `other` over the union
    /// of both domains.
    pub fn max_abs_diff(&self, other: &CentralityVector) -> f64 {
        let mut worst = 0.0f64;
        for v in self.values.keys().chain(other.values.keys()) {
            worst = worst.max((self.get(v) - other.get(v)).abs());
        }
        worst
    }
}

fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().expect("sigma count convertible to f64")
}

/// t-Stress: S_v = Σ_s b(s)·σ_{s,t}(G, v).
pub fn stress(g: &TargetedGraph) -> CentralityVector {
    let mut values: BTreeMap<NodeId, f64> =
        g.graph().nodes().map(|v| (v.clone(), 0.0)).collect();
    for (s, weight) in g.weights().support() {
        let table = g.shortest_path_counts(s).expect("source is a node");
        for (v, x) in values.iter_mut() {
            *x += weight * biguint_to_f64(&table.sigma_through(v));
        }
    }
    CentralityVector::new(Measure::Stress, None, values)
}

/// t-Betweenness: B_v = Σ_s b(s)·σ_{s,t}(G, v)/σ_{s,t}(G).
///
/// Each ratio is formed as an exact big-rational before the single rounding
/// to f64.
pub fn betweenness(g: &TargetedGraph) -> CentralityVector {
    let mut values: BTreeMap<NodeId, f64> =
        g.graph().nodes().map(|v| (v.clone(), 0.0)).collect();
    for (s, weight) in g.weights().support() {
        let table = g.shortest_path_counts(s).expect("source is a node");
        let total = table.sigma_total.clone();
        debug_assert!(!total.is_zero(), "class membership guarantees sigma > 0");
        for (v, x) in values.iter_mut() {
            let through = table.sigma_through(v);
            if through.is_zero() {
                continue;
            }
            let ratio = BigRational::new(through.into(), total.clone().into());
            *x += weight * ratio.to_f64().expect("ratio in [0, 1]");
        }
    }
    CentralityVector::new(Measure::Betweenness, None, values)
}

/// Expected decayed visit counts: the unique solution of
/// x_w = b(w) + Σ_{(r,w)∈E_t} a·x_r/|Γ⁺_r| on G_t = G − Γ⁺_t.
pub fn expected_visits(
    g: &TargetedGraph,
    a: DecayFactor,
) -> Result<CentralityVector, CentralityError> {
    let nodes: Vec<NodeId> = g.graph().nodes().cloned().collect();
    let index: BTreeMap<&NodeId, usize> = nodes.iter().zip(0..).collect();
    let t = g.target();
    let n = nodes.len();

    // Row w: x_w - a·Σ_r m_(r,w)/outdeg(r)·x_r = b(w), target row absorbing.
    let mut mat = vec![vec![0.0f64; n]; n];
    let mut rhs = vec![0.0f64; n];
    for (wi, w) in nodes.iter().enumerate() {
        mat[wi][wi] = 1.0;
        rhs[wi] = g.weights().get(w);
    }
    for (r, ri) in &index {
        if *r == t {
            continue; // Γ⁺_t removed: no outflow from the target.
        }
        let outdeg = g.graph().out_degree(r);
        debug_assert!(outdeg > 0, "non-target nodes have an escape edge");
        for (w, m) in g.graph().out_edges(r) {
            let wi = index[w];
            mat[wi][*ri] -= a.value() * m as f64 / outdeg as f64;
        }
    }
    let x = solve_dense(mat, rhs)?;

    let values = nodes
        .into_iter()
        .zip(x)
        // Round-off can leave values epsilon-negative; the measure is
        // non-negative by definition.
        .map(|(v, val)| (v, val.max(0.0)))
        .collect();
    let measure = if a.value() == 1.0 {
        Measure::RandomWalkBetweenness
    } else {
        Measure::PageRank
    };
    let alpha = (a.value() != 1.0).then_some(a.value());
    Ok(CentralityVector::new(measure, alpha, values))
}

/// t-Random Walk Betweenness: expected visits at a = 1.
pub fn random_walk_betweenness(g: &TargetedGraph) -> CentralityVector {
    expected_visits(g, DecayFactor::new(1.0).expect("1 is in range"))
        .expect("solvable for every graph in class")
}

/// t-PageRank with decay a ∈ [0, 1).
pub fn pagerank(g: &TargetedGraph, a: DecayFactor) -> Result<CentralityVector, CentralityError> {
    DecayFactor::pagerank(a.value())?;
    expected_visits(g, a)
}

/// Evaluates any measure; `alpha` is consulted only for PageRank.
pub fn evaluate(
    g: &TargetedGraph,
    measure: Measure,
    alpha: Option<f64>,
) -> Result<CentralityVector, CentralityError> {
    match measure {
        Measure::Stress => Ok(stress(g)),
        Measure::Betweenness => Ok(betweenness(g)),
        Measure::RandomWalkBetweenness => Ok(random_walk_betweenness(g)),
        Measure::PageRank => {
            let a = alpha.ok_or(CentralityError::InvalidDecay(f64::NAN))?;
            pagerank(g, DecayFactor::pagerank(a)?)
        }
    }
}

/// Gaussian elimination with partial pivoting on a dense system.
#[allow(clippy::needless_range_loop)] // elimination reads one row while updating another
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>, CentralityError> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot_row][col].abs() < 1e-300 {
            return Err(CentralityError::SingularSystem);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}
