//! Drawing strategies on cycles of length three to five.

use crate::error::StrategyError;
use crate::graph::Vertex;
use crate::rules::{GameState, Move, Player};

use super::{leftover, Script, StrategyId, StrategyMemory};

fn lata_vertices(state: &GameState, p: Player) -> Vec<Vertex> {
    state
        .graph()
        .vertices()
        .filter(|&v| state.owner(v) == Some(p))
        .collect()
}

fn place_on_empty(state: &GameState, v: Vertex, count: u32) -> Result<Move, StrategyError> {
    if !state.is_empty_vertex(v) {
        return Err(StrategyError::Unspecified(format!("vertex {v} is taken")));
    }
    let budget = state.budget(state.to_move());
    if count == 0 || count > budget {
        return Err(StrategyError::Unspecified(format!(
            "{count} troops with {budget} left"
        )));
    }
    Ok(Move::place(v, count))
}

/// Everything on the lowest empty vertex.
pub(crate) fn triangle(state: &GameState) -> Result<Move, StrategyError> {
    let me = state.to_move();
    match state.empty_vertices().next() {
        Some(v) => Ok(Move::place(v, state.budget(me))),
        None => Ok(Move::PassPlacement),
    }
}

pub(crate) fn lata_c4(state: &GameState) -> Result<Move, StrategyError> {
    let t = state.initial_budget(Player::Lata);
    match lata_vertices(state, Player::Lata).as_slice() {
        [] => place_on_empty(state, 0, t.div_ceil(2)),
        [u] if t / 2 > 0 => {
            let graph = state.graph();
            match graph.neighbors(*u).iter().copied().find(|&v| state.is_empty_vertex(v)) {
                Some(v) => place_on_empty(state, v, t / 2),
                None => Err(StrategyError::Unspecified(format!(
                    "both neighbours of {u} are taken"
                ))),
            }
        }
        _ => leftover(state),
    }
}

pub(crate) fn raj_c4(state: &GameState) -> Result<Move, StrategyError> {
    let t = state.initial_budget(Player::Raj);
    let lata = lata_vertices(state, Player::Lata);
    match lata_vertices(state, Player::Raj).as_slice() {
        [] => {
            let [u] = lata.as_slice() else {
                return Err(StrategyError::Unspecified(
                    "Raj's first move needs exactly one Lata vertex".into(),
                ));
            };
            let a = state.troops(*u);
            let opposite = (u + 2) % 4;
            let count = if a == t { t } else { t.div_ceil(2) };
            place_on_empty(state, opposite, count)
        }
        [w] if state.budget(Player::Raj) > 0 => {
            let graph = state.graph();
            match graph.neighbors(*w).iter().copied().find(|&v| state.is_empty_vertex(v)) {
                Some(v) => place_on_empty(state, v, t / 2),
                None => leftover(state),
            }
        }
        _ => leftover(state),
    }
}

/// `v_k` under the bound orientation.
fn v(anchor: Vertex, dir: i8, k: u32) -> Vertex {
    (i64::from(anchor) + i64::from(dir) * i64::from(k - 1)).rem_euclid(5) as Vertex
}

fn orientation(memory: &StrategyMemory) -> Result<(Option<Vertex>, i8), StrategyError> {
    match memory.script {
        Script::Cycle { anchor, dir } => Ok((anchor, dir)),
        _ => Err(StrategyError::Inconsistent("missing cycle memory".into())),
    }
}

/// Lata on C5: half her troops (rounded down) on `v_1 = 0`, then the
/// case split on where and how heavily Raj answered.
pub(crate) fn lata_c5(state: &GameState, memory: &StrategyMemory) -> Result<Move, StrategyError> {
    let t = state.initial_budget(Player::Lata);
    let (anchor, dir) = orientation(memory)?;
    let anchor = anchor.unwrap_or(0);
    let mine = lata_vertices(state, Player::Lata);
    let raj = lata_vertices(state, Player::Raj);
    if mine.is_empty() {
        return place_on_empty(state, anchor, t / 2);
    }
    if dir == 0 {
        return leftover(state);
    }
    let at = |k| v(anchor, dir, k);
    let Some(&r) = raj.first() else {
        return leftover(state);
    };
    let a = state.troops(r);
    let half_up = t.div_ceil(2);
    match (mine.len(), r == at(2)) {
        (1, true) => {
            if a == t {
                place_on_empty(state, at(5), 1)
            } else {
                place_on_empty(state, at(3), half_up)
            }
        }
        (1, false) => {
            if a == t {
                place_on_empty(state, at(5), state.budget(Player::Lata))
            } else if a <= half_up {
                place_on_empty(state, at(2), half_up)
            } else {
                place_on_empty(state, at(5), half_up)
            }
        }
        (2, true) if a == t && state.owner(at(5)) == Some(Player::Lata) => {
            place_on_empty(state, at(4), state.budget(Player::Lata))
        }
        _ => leftover(state),
    }
}

/// Raj on C5, oriented from Lata's first vertex: `⌊T/2⌋` on `v_5`, then an
/// answer chosen by where Lata's second placement went and its size.
pub(crate) fn raj_c5(state: &GameState, memory: &StrategyMemory) -> Result<Move, StrategyError> {
    let t = state.initial_budget(Player::Raj);
    let (anchor, dir) = orientation(memory)?;
    let Some(v1) = anchor else {
        return Err(StrategyError::Inconsistent("v_1 is not bound".into()));
    };
    let at = |k| v(v1, dir, k);
    let x = state.troops(v1);
    let half_up = t.div_ceil(2);
    let lata = lata_vertices(state, Player::Lata);
    let raj = lata_vertices(state, Player::Raj);
    if raj.is_empty() {
        return if x == t {
            place_on_empty(state, at(3), 1)
        } else {
            place_on_empty(state, at(5), t / 2)
        };
    }
    if x == t {
        if raj == [at(3)] {
            return place_on_empty(state, at(4), state.budget(Player::Raj));
        }
        return leftover(state);
    }
    if raj != [at(5)] || lata.len() != 2 {
        return leftover(state);
    }
    let u = lata.iter().copied().find(|&u| u != v1).unwrap_or(v1);
    let Some(k) = (2..=4).find(|&k| at(k) == u) else {
        return Err(StrategyError::Inconsistent(format!(
            "Lata's second vertex {u} is not among v_2..v_4"
        )));
    };
    let y = state.troops(u);
    let target = if y == t - x {
        [3, 4, 2][k as usize - 2]
    } else if y >= half_up {
        [4, 2, 2][k as usize - 2]
    } else {
        [3, 2, 2][k as usize - 2]
    };
    place_on_empty(state, at(target), half_up)
}

/// Binds `v_1` (Raj) or the orientation (Lata) from the first opponent move.
pub(crate) fn observe(
    id: StrategyId,
    memory: &mut StrategyMemory,
    mv: Move,
    before: &GameState,
) -> Result<(), StrategyError> {
    let Move::Place { vertex, .. } = mv else {
        return Ok(());
    };
    let Script::Cycle { anchor, dir } = &mut memory.script else {
        return Err(StrategyError::Inconsistent("missing cycle memory".into()));
    };
    match id {
        StrategyId::LataC5 if *dir == 0 && before.to_move() == Player::Raj => {
            let a = anchor.unwrap_or(0);
            *dir = match (i64::from(vertex) - i64::from(a)).rem_euclid(5) {
                1 | 2 => 1,
                3 | 4 => -1,
                _ => {
                    return Err(StrategyError::Inconsistent(format!(
                        "Raj's reply {vertex} coincides with v_1"
                    )))
                }
            };
        }
        StrategyId::RajC5 if anchor.is_none() && before.to_move() == Player::Lata => {
            *anchor = Some(vertex);
        }
        _ => {}
    }
    Ok(())
}
