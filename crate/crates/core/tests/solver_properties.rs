//! The memoized solver against the plain minimax, and its self-consistency.

use aggression_core::solver::{canonical_key, solve_reference};
use aggression_core::{
    AttackPolicy, GameState, Graph, GraphFamily, Payoff, RuleConfig, SearchLimits, Solver,
    SymmetryGroup, ThresholdSearch, Vertex,
};
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2u32..=5).prop_flat_map(|n| {
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| Graph::new(n, &edges).unwrap())
    })
}

fn rules() -> impl Strategy<Value = RuleConfig> {
    (any::<bool>(), prop_oneof![Just(None), Just(Some(1)), Just(Some(2))]).prop_map(
        |(optional, cap)| RuleConfig {
            attack_policy: if optional {
                AttackPolicy::Optional
            } else {
                AttackPolicy::Mandatory
            },
            placement_cap: cap,
        },
    )
}

fn exact(group: SymmetryGroup) -> Solver {
    Solver::new(group, SearchLimits::unlimited())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_matches_reference(g in small_graph(), tl in 0u32..=3, tr in 0u32..=3, r in rules()) {
        let s = GameState::new(g, tl, tr, r).unwrap();
        prop_assert_eq!(exact(SymmetryGroup::Identity).value(&s).unwrap(), solve_reference(&s).unwrap());
    }

    #[test]
    fn value_is_invariant_under_relabeling(
        g in small_graph(),
        tl in 0u32..=3,
        tr in 0u32..=3,
        perm_seed in any::<proptest::sample::Index>(),
    ) {
        let n = g.vertex_count() as usize;
        // Rotate the labels by a seed-chosen offset, then reverse.
        let k = perm_seed.index(n);
        let perm: Vec<Vertex> = (0..n).map(|i| (n - 1 - (i + k) % n) as Vertex).collect();
        let s = GameState::new(g.clone(), tl, tr, RuleConfig::standard()).unwrap();
        let t = GameState::new(g.relabeled(&perm), tl, tr, RuleConfig::standard()).unwrap();
        let solver = exact(SymmetryGroup::Identity);
        prop_assert_eq!(solver.value(&s).unwrap(), solver.value(&t).unwrap());
    }

    #[test]
    fn principal_line_realizes_value(g in small_graph(), tl in 0u32..=4, tr in 0u32..=4) {
        let s = GameState::new(g, tl, tr, RuleConfig::standard()).unwrap();
        let r = exact(SymmetryGroup::Identity).solve(&s).unwrap();
        let mut end = s.clone();
        for mv in &r.principal_line {
            end = end.apply(*mv).unwrap();
        }
        prop_assert!(end.is_terminal());
        prop_assert_eq!(end.payoff(), r.value);
    }

    #[test]
    fn threshold_search_brackets_value(g in small_graph(), tl in 0u32..=3, tr in 0u32..=3) {
        let s = GameState::new(g, tl, tr, RuleConfig::standard()).unwrap();
        let v = exact(SymmetryGroup::Identity).value(&s).unwrap();
        for t in [v, Payoff::new(v.territory_diff, v.troop_diff + 1), Payoff::new(v.territory_diff + 1, i64::MIN)] {
            let search = ThresholdSearch::new(SymmetryGroup::Identity, t, SearchLimits::unlimited());
            prop_assert_eq!(search.lata_reaches(&s).unwrap(), v >= t);
        }
    }
}

#[test]
fn symmetry_groups_agree_with_identity() {
    let cases = [
        (GraphFamily::Matching(3), SymmetryGroup::MatchingEdges),
        (GraphFamily::Cycle(5), SymmetryGroup::CycleDihedral),
        (GraphFamily::Cycle(6), SymmetryGroup::CycleDihedral),
    ];
    for (family, group) in cases {
        for t in 1..=3 {
            let s = GameState::new(family.generate().unwrap(), t, t, RuleConfig::standard()).unwrap();
            assert_eq!(
                exact(group).value(&s).unwrap(),
                exact(SymmetryGroup::Identity).value(&s).unwrap(),
                "{family} T={t}"
            );
        }
    }
}

#[test]
fn symmetric_states_share_a_key() {
    let g = GraphFamily::Cycle(5).generate().unwrap();
    let s = GameState::new(g, 3, 3, RuleConfig::standard()).unwrap();
    let a = s.apply(aggression_core::Move::place(1, 2)).unwrap();
    let b = s.apply(aggression_core::Move::place(4, 2)).unwrap();
    assert_eq!(
        canonical_key(&a, SymmetryGroup::CycleDihedral).unwrap(),
        canonical_key(&b, SymmetryGroup::CycleDihedral).unwrap()
    );
    assert_ne!(
        canonical_key(&a, SymmetryGroup::Identity).unwrap(),
        canonical_key(&b, SymmetryGroup::Identity).unwrap()
    );
}
