//! Deliberately naive minimax: no memo, no symmetry, no ordering. Used only to
//! cross-check [`super::Solver`] on tiny boards.

use crate::error::SolveError;
use crate::rules::{GameState, Payoff, Player};

pub const REFERENCE_MAX_VERTICES: u32 = 6;
pub const REFERENCE_MAX_BUDGET: u32 = 3;

pub fn solve_reference(state: &GameState) -> Result<Payoff, SolveError> {
    let n = state.graph().vertex_count();
    if n > REFERENCE_MAX_VERTICES {
        return Err(SolveError::ReferenceBound(format!(
            "{n} vertices (max {REFERENCE_MAX_VERTICES})"
        )));
    }
    for p in Player::BOTH {
        if state.budget(p) > REFERENCE_MAX_BUDGET {
            return Err(SolveError::ReferenceBound(format!(
                "{p} budget {} (max {REFERENCE_MAX_BUDGET})",
                state.budget(p)
            )));
        }
    }
    Ok(minimax(state))
}

fn minimax(state: &GameState) -> Payoff {
    if state.is_terminal() {
        return state.payoff();
    }
    let values = state
        .legal_moves()
        .into_iter()
        .map(|mv| minimax(&state.apply(mv).expect("legal move applies")));
    match state.to_move() {
        Player::Lata => values.max(),
        Player::Raj => values.min(),
    }
    .expect("non-terminal states have a legal move")
}
