//! Property-based invariants over randomly generated class graphs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tcentral::axioms::{generate_graph, GraphGenConfig};
use tcentral::centrality::{
    betweenness, expected_visits, random_walk_betweenness, stress, DecayFactor,
};
use tcentral::graph::TargetedGraph;
use tcentral::io::{parse_graph, serialize_graph};

fn arb_graph() -> impl Strategy<Value = TargetedGraph> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        generate_graph(&GraphGenConfig::default(), &mut rng, "t", "")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trips(g in arb_graph()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn values_are_nonnegative_and_target_absorbs_everything(g in arb_graph()) {
        let total = g.weights().total();
        let tol = 1e-9 * total.max(1.0);
        for cv in [stress(&g), betweenness(&g), random_walk_betweenness(&g)] {
            for (_, x) in cv.iter() {
                prop_assert!(x >= 0.0);
            }
        }
        // Every unit of weight reaches the target under betweenness and
        // the plain random walk.
        prop_assert!((betweenness(&g).get(g.target()) - total).abs() <= tol);
        prop_assert!((random_walk_betweenness(&g).get(g.target()) - total).abs() <= tol);
    }

    #[test]
    fn betweenness_never_exceeds_stress(g in arb_graph()) {
        let s = stress(&g);
        let b = betweenness(&g);
        let tol = 1e-9 * g.weights().total().max(1.0);
        for (v, x) in b.iter() {
            prop_assert!(x <= s.get(v) + tol, "{v}: b {} > s {}", x, s.get(v));
        }
    }

    #[test]
    fn visits_monotone_in_decay(g in arb_graph()) {
        let tol = 1e-9 * g.weights().total().max(1.0);
        let mut prev = expected_visits(&g, DecayFactor::new(0.0).unwrap()).unwrap();
        for a in [0.3, 0.6, 0.9, 1.0] {
            let cur = expected_visits(&g, DecayFactor::new(a).unwrap()).unwrap();
            for (v, x) in cur.iter() {
                prop_assert!(x + tol >= prev.get(v), "{v} shrank from {} to {x} at a={a}", prev.get(v));
            }
            prev = cur;
        }
    }

    #[test]
    fn graph_sum_with_relabelled_copy_doubles_nothing_shared(g in arb_graph()) {
        // Summing with a disjoint relabelled copy keeps the original's
        // values intact on its own nodes except at the shared target.
        let text = serialize_graph(&g);
        let relabelled = parse_graph(&text.replace("v", "u")).unwrap();
        if g.graph().nodes().all(|v| v == g.target() || !relabelled.graph().contains_node(v)) {
            let sum = g.graph_sum(&relabelled).unwrap();
            let tol = 1e-9 * sum.weights().total().max(1.0);
            let b = betweenness(&g);
            let bs = betweenness(&sum);
            for v in g.graph().nodes().filter(|v| *v != g.target()) {
                prop_assert!((bs.get(v) - b.get(v)).abs() <= tol);
            }
        }
    }
}
