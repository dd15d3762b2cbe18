use proptest::prelude::*;

use coalition_core::coalition::{
    max_coalition_number, naive_max_oracle, SolveStatus, SolverConfig,
};
use coalition_core::domination::{is_dominating, is_restrained_dominating, DominationKind};
use coalition_core::graph::{Graph, VertexSet};
use coalition_core::CoalitionCertificate;

/// Graph on `lo..=hi` vertices with each edge present independently.
fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut it = bits.into_iter();
            for v in 1..n {
                for u in 0..v {
                    if it.next().unwrap() {
                        edges.push((u, v));
                    }
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn graph_and_set(hi: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(1, hi).prop_flat_map(|g| {
        let full = VertexSet::full(g.order()).bits();
        (Just(g), any::<u64>().prop_map(move |b| VertexSet(b & full)))
    })
}

fn value_or_zero(g: &Graph, kind: DominationKind, config: &SolverConfig) -> usize {
    let r = max_coalition_number(g, kind, config);
    match r.status {
        SolveStatus::Optimal => r.value.unwrap(),
        SolveStatus::Infeasible => 0,
        SolveStatus::BudgetExceeded => panic!("no budget was set"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graph6_round_trip(g in graph(1, 16)) {
        let text = g.to_graph6();
        prop_assert_eq!(Graph::from_graph6(&text).unwrap(), g);
    }

    #[test]
    fn degree_sum_is_twice_edge_count(g in graph(1, 16)) {
        let sum: usize = (0..g.order()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(sum, 2 * g.edge_count());
    }

    #[test]
    fn restrained_sets_dominate((g, s) in graph_and_set(12)) {
        if is_restrained_dominating(&g, s) {
            prop_assert!(is_dominating(&g, s));
        }
    }

    #[test]
    fn domination_is_upward_closed((g, s) in graph_and_set(12), extra in any::<u64>()) {
        let t = VertexSet(s.bits() | (extra & VertexSet::full(g.order()).bits()));
        if is_dominating(&g, s) {
            prop_assert!(is_dominating(&g, t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_agrees_with_brute_force(g in graph(1, 8), variant in 0usize..16) {
        let config = SolverConfig::default().prune_variants()[variant].clone();
        for kind in DominationKind::ALL {
            prop_assert_eq!(
                value_or_zero(&g, kind, &config),
                naive_max_oracle(&g, kind).unwrap(),
                "{} {}", g.to_graph6(), kind
            );
        }
    }

    #[test]
    fn values_survive_relabeling(
        (g, perm) in graph(1, 9).prop_flat_map(|g| {
            let n = g.order();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let h = g.relabel(&perm);
        let config = SolverConfig::default();
        for kind in DominationKind::ALL {
            prop_assert_eq!(value_or_zero(&g, kind, &config), value_or_zero(&h, kind, &config));
        }
    }

    #[test]
    fn restrained_never_exceeds_plain(g in graph(2, 9)) {
        let config = SolverConfig::default();
        let c = value_or_zero(&g, DominationKind::Dominating, &config);
        let rc = value_or_zero(&g, DominationKind::Restrained, &config);
        prop_assert!(rc <= c, "{}: RC {} > C {}", g.to_graph6(), rc, c);
    }

    #[test]
    fn certificates_survive_json(g in graph(2, 9)) {
        for kind in DominationKind::ALL {
            let r = max_coalition_number(&g, kind, &SolverConfig::default());
            if let Some(cert) = r.certificate {
                let text = serde_json::to_string(&cert.to_json()).unwrap();
                let back = CoalitionCertificate::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
                prop_assert!(back.verify(&g).is_ok());
                prop_assert_eq!(back, cert);
            }
        }
    }
}
