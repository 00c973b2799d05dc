//! Mirror strategies for the one-troop-per-turn variant.

use crate::error::StrategyError;
use crate::graph::Vertex;
use crate::rules::{GameState, Move, Phase};

use super::{capped, Script, StrategyMemory};

fn last_move(memory: &StrategyMemory) -> Result<Option<Move>, StrategyError> {
    match memory.script {
        Script::Micro { last } => Ok(last),
        _ => Err(StrategyError::Inconsistent("missing mirror memory".into())),
    }
}

fn lowest_empty(state: &GameState) -> Move {
    match state.empty_vertices().next() {
        Some(v) => capped(state, v, 1),
        None => Move::PassPlacement,
    }
}

/// Attack preference: the mirror image of the opponent's last attack, then
/// a vertex across the centre, then the lowest legal target.
fn mirrored_attack(
    state: &GameState,
    last: Option<Move>,
    reflect: impl Fn(Vertex) -> Vertex,
    across: &[Vertex],
) -> Move {
    let legal = state.legal_moves();
    let ok = |v: Vertex| legal.contains(&Move::attack(v));
    if let Some(Move::Attack { vertex }) = last {
        if ok(reflect(vertex)) {
            return Move::attack(reflect(vertex));
        }
    }
    if let Some(&v) = across.iter().find(|&&v| ok(v)) {
        return Move::attack(v);
    }
    legal
        .iter()
        .copied()
        .find(|m| matches!(m, Move::Attack { .. }))
        .unwrap_or(Move::PassAttack)
}

/// First player on a path: start in the middle, then copy the opponent's
/// placement in the reflection `i -> n-1-i`.
pub(crate) fn path_mirror(state: &GameState, memory: &StrategyMemory) -> Result<Move, StrategyError> {
    let n = state.graph().vertex_count();
    let reflect = |v: Vertex| n - 1 - v;
    let last = last_move(memory)?;
    if state.phase() == Phase::Attack {
        let across: Vec<Vertex> = if n % 2 == 0 && n >= 2 {
            vec![n / 2 - 1, n / 2]
        } else {
            Vec::new()
        };
        return Ok(mirrored_attack(state, last, reflect, &across));
    }
    match last {
        None => {
            let start = if n % 2 == 1 { n / 2 } else { 0 };
            if state.is_empty_vertex(start) {
                Ok(capped(state, start, 1))
            } else {
                Ok(lowest_empty(state))
            }
        }
        Some(Move::Place { vertex, .. }) if state.is_empty_vertex(reflect(vertex)) => {
            Ok(capped(state, reflect(vertex), 1))
        }
        _ => Ok(lowest_empty(state)),
    }
}

/// Second player on an odd cycle: copy the opponent in the reflection
/// through vertex 0, `i -> (n-i) mod n`.
pub(crate) fn cycle_mirror(state: &GameState, memory: &StrategyMemory) -> Result<Move, StrategyError> {
    let n = state.graph().vertex_count();
    let reflect = |v: Vertex| (n - v) % n;
    let last = last_move(memory)?;
    if state.phase() == Phase::Attack {
        let across = [(n - 1) / 2, n.div_ceil(2)];
        return Ok(mirrored_attack(state, last, reflect, &across));
    }
    match last {
        Some(Move::Place { vertex, .. }) if vertex != 0 && state.is_empty_vertex(reflect(vertex)) => {
            Ok(capped(state, reflect(vertex), 1))
        }
        _ => Ok(lowest_empty(state)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;
    use crate::rules::RuleConfig;
    use crate::strategies::{initial_memory, next_move, relabel, StrategyId};

    #[test]
    fn path_mirror_reflects() {
        let id = StrategyId::MicroFirstPathMirror;
        let s = GameState::new(GraphFamily::Path(5).generate().unwrap(), 3, 3, RuleConfig::micro())
            .unwrap();
        let mem = initial_memory(id, &s);
        let (mv, mem) = next_move(id, &s, &mem).unwrap();
        assert_eq!(mv, Move::place(2, 1));
        let s = s.apply(mv).unwrap();
        let mem = relabel(id, &mem, Move::place(1, 1), &s).unwrap();
        let s = s.apply(Move::place(1, 1)).unwrap();
        let (mv, _) = next_move(id, &s, &mem).unwrap();
        assert_eq!(mv, Move::place(3, 1));
    }

    #[test]
    fn cycle_mirror_reflects_through_zero() {
        let id = StrategyId::MicroSecondOddcycleMirror;
        let s = GameState::new(GraphFamily::Cycle(5).generate().unwrap(), 2, 2, RuleConfig::micro())
            .unwrap();
        let mem = initial_memory(id, &s);
        let mem = relabel(id, &mem, Move::place(1, 1), &s).unwrap();
        let s = s.apply(Move::place(1, 1)).unwrap();
        let (mv, _) = next_move(id, &s, &mem).unwrap();
        assert_eq!(mv, Move::place(4, 1));
    }
}
