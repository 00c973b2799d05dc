use std::collections::BTreeMap;

use aggression_core::codec::{
    from_json, parse_colored_graph, parse_graph, parse_instance, parse_report, parse_snapshot,
    serialize_graph, to_json, StateSnapshot,
};
use aggression_core::reduction::{reduce_mcc, ColoredGraph};
use aggression_core::response::ORInstance;
use aggression_core::strategies::StrategyId;
use aggression_core::verifier::verify_guarantee;
use aggression_core::{GameState, Graph, GraphFamily, Move, RuleConfig, SymmetryGroup, Vertex};
use proptest::prelude::*;

fn graph() -> impl Strategy<Value = Graph> {
    (1u32..=8).prop_flat_map(|n| {
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| Graph::new(n, &edges).unwrap())
    })
}

proptest! {
    #[test]
    fn graphs_round_trip(g in graph()) {
        let text = serialize_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(serialize_graph(&back), text);
    }

    #[test]
    fn snapshots_round_trip(g in graph(), t in 0u32..4, picks in proptest::collection::vec(any::<proptest::sample::Index>(), 0..12)) {
        let mut s = GameState::new(g, t, t, RuleConfig::standard()).unwrap();
        for i in picks {
            if s.is_terminal() {
                break;
            }
            let legal = s.legal_moves();
            s = s.apply(legal[i.index(legal.len())]).unwrap();
        }
        let text = to_json(&StateSnapshot::of(&s));
        prop_assert_eq!(to_json(&parse_snapshot(&text).unwrap()), text);
    }

    #[test]
    fn instances_round_trip(g in graph(), sigma in proptest::collection::vec(0u32..8, 0..6)) {
        let n = g.vertex_count();
        let f1: BTreeMap<Vertex, u32> = (0..n).step_by(2).map(|v| (v, v + 1)).collect();
        let f2: BTreeMap<Vertex, u32> = (1..n).step_by(2).map(|v| (v, 2)).collect();
        let sigma: Vec<Vertex> = sigma.into_iter().filter(|&v| v < n).collect();
        let inst = ORInstance { graph: g, f1, f2, sigma };
        let text = to_json(&inst);
        prop_assert_eq!(to_json(&parse_instance(&text).unwrap()), text);
    }
}

#[test]
fn moves_use_tagged_json() {
    let moves = vec![
        Move::place(3, 2),
        Move::PassPlacement,
        Move::attack(1),
        Move::PassAttack,
    ];
    let text = serde_json::to_string(&moves).unwrap();
    assert_eq!(
        text,
        r#"[{"type":"place","vertex":3,"count":2},{"type":"pass_placement"},{"type":"attack","vertex":1},{"type":"pass_attack"}]"#
    );
    assert_eq!(from_json::<Vec<Move>>(&text).unwrap(), moves);
}

#[test]
fn reports_round_trip() {
    let g = GraphFamily::Matching(2).generate().unwrap();
    let r = verify_guarantee(StrategyId::RajMirrorMatching, &g, (2, 2), SymmetryGroup::MatchingEdges)
        .unwrap();
    let text = to_json(&r);
    assert_eq!(parse_report(&text).unwrap(), r);
    assert_eq!(to_json(&parse_report(&text).unwrap()), text);
}

#[test]
fn reduction_documents_round_trip() {
    let g = ColoredGraph::blocks(3, 6, vec![(0, 6), (6, 12), (0, 12)]);
    let text = to_json(&g);
    assert_eq!(to_json(&parse_colored_graph(&text).unwrap()), text);
    let out = reduce_mcc(&g).unwrap();
    let inst = to_json(&out.instance);
    assert_eq!(to_json(&parse_instance(&inst).unwrap()), inst);
}

#[test]
fn invalid_documents_are_rejected() {
    assert!(parse_colored_graph(r#"{"k": 2, "n": 2, "classes": [[0, 1], [1, 2]], "edges": []}"#).is_err());
    assert!(parse_instance(
        r#"{"graph": {"vertices": 2, "edges": [[0, 1]]}, "f1": {"0": 1}, "f2": {"0": 1}, "sigma": []}"#
    )
    .is_err());
    assert!(parse_graph(r#"{"vertices": 2, "edges": [[0, 1]], "extra": true}"#).is_err());
}
