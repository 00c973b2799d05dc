//! Random playouts shared by the invariant tests and the acceptance gate.

use aggression_core::{AttackPolicy, GameState, GraphFamily, Move, Phase, Player, RuleConfig, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_family(rng: &mut impl Rng) -> GraphFamily {
    match rng.gen_range(0..5) {
        0 => GraphFamily::Matching(rng.gen_range(1..=4)),
        1 => GraphFamily::Cycle(rng.gen_range(3..=7)),
        2 => GraphFamily::Path(rng.gen_range(2..=7)),
        3 => GraphFamily::Complete(rng.gen_range(2..=5)),
        _ => GraphFamily::Star(rng.gen_range(2..=6)),
    }
}

fn random_rules(rng: &mut impl Rng) -> RuleConfig {
    let policy = if rng.gen_bool(0.5) {
        AttackPolicy::Mandatory
    } else {
        AttackPolicy::Optional
    };
    let cap = match rng.gen_range(0..4) {
        0 => Some(1),
        1 => Some(2),
        _ => None,
    };
    RuleConfig {
        attack_policy: policy,
        placement_cap: cap,
    }
}

fn strength(s: &GameState, attacker: Player, v: Vertex) -> u32 {
    s.graph()
        .neighbors(v)
        .iter()
        .filter(|&&u| s.owner(u) == Some(attacker))
        .map(|&u| s.troops(u))
        .sum()
}

/// Checks every per-state invariant, and the step invariants from `prev`.
fn check_state(s: &GameState, prev: Option<(&GameState, Move)>) -> Result<(), String> {
    for v in s.graph().vertices() {
        match (s.owner(v), s.troops(v)) {
            (None, 0) | (Some(_), 1..) => {}
            (o, t) => return Err(format!("vertex {v}: owner {o:?} with {t} troops")),
        }
    }
    for p in Player::BOTH {
        if s.phase() == Phase::Placement && s.troops_on_board(p) + s.budget(p) != s.initial_budget(p) {
            return Err(format!("{p}: troops not conserved during placement"));
        }
        if s.troops_on_board(p) + s.budget(p) > s.initial_budget(p) {
            return Err(format!("{p}: troops created"));
        }
    }
    if s.phase() == Phase::Attack {
        let p = s.to_move();
        let legal = s.legal_moves();
        let mut vulnerable = Vec::new();
        for v in s.graph().vertices() {
            let open = s.owner(v) == Some(p.opponent()) && strength(s, p, v) > s.troops(v);
            if open {
                vulnerable.push(v);
            }
            if open != legal.contains(&Move::attack(v)) {
                return Err(format!("attack on {v} legality disagrees with strict vulnerability"));
            }
        }
        if s.vulnerable(p.opponent()) != vulnerable {
            return Err("vulnerable set disagrees with attack strengths".into());
        }
        let may_pass = legal.contains(&Move::PassAttack);
        let must_attack = s.config().attack_policy == AttackPolicy::Mandatory && !vulnerable.is_empty();
        if may_pass == must_attack {
            return Err("attack pass availability is wrong".into());
        }
    }
    if s.phase() == Phase::Placement {
        let legal = s.legal_moves();
        let can_place = legal.iter().any(|m| matches!(m, Move::Place { .. }));
        if can_place == legal.contains(&Move::PassPlacement) {
            return Err("placement pass must be forced".into());
        }
    }
    if let Some((before, mv)) = prev {
        if before.phase() == Phase::Attack {
            for v in s.graph().vertices() {
                let (o0, o1) = (before.owner(v), s.owner(v));
                if o0.is_none() && o1.is_some() {
                    return Err(format!("vertex {v} repopulated by {mv}"));
                }
                if o1.is_some() && (o0 != o1 || before.troops(v) != s.troops(v)) {
                    return Err(format!("surviving vertex {v} changed on {mv}"));
                }
            }
            if let Move::Attack { vertex } = mv {
                if s.owner(vertex).is_some() {
                    return Err(format!("attacked vertex {vertex} survived"));
                }
            }
        }
    }
    Ok(())
}

fn termination_bound(s: &GameState) -> usize {
    let budgets = (s.initial_budget(Player::Lata) + s.initial_budget(Player::Raj)) as usize;
    budgets + 2 * s.graph().len() + 4
}

/// One random game, played alongside a relabeled copy of itself.
pub fn playout(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = random_family(&mut rng).generate().unwrap();
    let (tl, tr) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
    let rules = random_rules(&mut rng);
    let mut perm: Vec<Vertex> = graph.vertices().collect();
    perm.shuffle(&mut rng);
    let mut s = GameState::new(graph.clone(), tl, tr, rules).unwrap();
    let mut t = GameState::new(graph.relabeled(&perm), tl, tr, rules).unwrap();
    check_state(&s, None)?;
    let bound = termination_bound(&s);
    let mut steps = 0;
    while !s.is_terminal() {
        let legal = s.legal_moves();
        let mut mapped: Vec<Move> = legal.iter().map(|m| m.relabeled(&perm)).collect();
        mapped.sort();
        if mapped != t.legal_moves() {
            return Err(format!("seed {seed}: legal moves not equivariant"));
        }
        let mv = *legal.choose(&mut rng).unwrap();
        let next = s.apply(mv).map_err(|e| format!("seed {seed}: legal move {mv} rejected: {e}"))?;
        check_state(&next, Some((&s, mv))).map_err(|e| format!("seed {seed}: {e}"))?;
        t = t.apply(mv.relabeled(&perm)).unwrap();
        s = next;
        steps += 1;
        if steps > bound {
            return Err(format!("seed {seed}: no end after {bound} moves"));
        }
    }
    if !t.is_terminal() || s.outcome() != t.outcome() {
        return Err(format!("seed {seed}: relabeled game scored differently"));
    }
    Ok(())
}

