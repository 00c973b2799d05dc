//! Exact perfect-play evaluation.
//!
//! Values are full lexicographic [`Payoff`]s (Lata maximizes, Raj minimizes),
//! so territory margins can be read directly off the result. The search is a
//! plain memoized minimax over canonical keys; no pruning touches the exact
//! value. [`ThresholdSearch`] answers the cheaper yes/no question "can Lata
//! force at least this payoff" with early exits, which is what the strategy
//! repair path needs.

mod reference;
pub mod symmetry;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use reference::{solve_reference, REFERENCE_MAX_BUDGET, REFERENCE_MAX_VERTICES};
pub use symmetry::{canonical_key, CanonicalKey, SymmetryGroup};

use crate::error::SolveError;
use crate::rules::{GameState, Move, Payoff, Player};
use symmetry::key_unchecked;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl SearchLimits {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes: Some(max_nodes),
            max_time: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub value: Payoff,
    pub best_move: Option<Move>,
    pub principal_line: Vec<Move>,
    pub nodes_expanded: u64,
    pub table_hits: u64,
}

struct Budget {
    limits: SearchLimits,
    started: Instant,
    nodes: AtomicU64,
    hits: AtomicU64,
    blown: AtomicBool,
}

impl Budget {
    fn new(limits: SearchLimits) -> Self {
        Self {
            limits,
            started: Instant::now(),
            nodes: AtomicU64::new(0),
            hits: AtomicU64::new(0),
            blown: AtomicBool::new(false),
        }
    }

    fn tick(&self) -> Result<(), SolveError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limits.max_nodes.is_some_and(|max| n > max);
        let over_time = n % 4096 == 0
            && self
                .limits
                .max_time
                .is_some_and(|t| self.started.elapsed() > t);
        if over_nodes || over_time || self.blown.load(Ordering::Relaxed) {
            self.blown.store(true, Ordering::Relaxed);
            return Err(SolveError::LimitExceeded { nodes: n });
        }
        Ok(())
    }

    fn hit(&self) {
        self.hits.fetch_add(1, Ordering::Relaxed);
    }
}

/// Memoized exact solver. The table survives across calls, so repeated
/// queries on related states share work. Safe to use from many threads.
pub struct Solver {
    symmetry: SymmetryGroup,
    table: DashMap<CanonicalKey, Payoff>,
    budget: Budget,
    parallel_root: bool,
}

impl Solver {
    pub fn new(symmetry: SymmetryGroup, limits: SearchLimits) -> Self {
        Self {
            symmetry,
            table: DashMap::new(),
            budget: Budget::new(limits),
            parallel_root: false,
        }
    }

    /// Evaluate root children on the rayon pool. Tie-breaking happens after
    /// all root values are known, so results do not depend on scheduling.
    pub fn with_parallel_root(mut self, parallel: bool) -> Self {
        self.parallel_root = parallel;
        self
    }

    pub fn symmetry(&self) -> SymmetryGroup {
        self.symmetry
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.budget.nodes.load(Ordering::Relaxed)
    }

    pub fn table_hits(&self) -> u64 {
        self.budget.hits.load(Ordering::Relaxed)
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    /// Minimax value of `state`.
    pub fn value(&self, state: &GameState) -> Result<Payoff, SolveError> {
        self.symmetry.check_sound(state.graph())?;
        self.value_rec(state)
    }

    fn value_rec(&self, state: &GameState) -> Result<Payoff, SolveError> {
        if state.is_terminal() {
            return Ok(state.payoff());
        }
        let key = key_unchecked(state, self.symmetry);
        if let Some(v) = self.table.get(&key) {
            self.budget.hit();
            return Ok(*v);
        }
        self.budget.tick()?;
        let maximize = state.to_move() == Player::Lata;
        let mut best: Option<Payoff> = None;
        for mv in state.legal_moves() {
            let v = self.value_rec(&state.apply_unchecked(mv))?;
            best = Some(match best {
                None => v,
                Some(b) if maximize => b.max(v),
                Some(b) => b.min(v),
            });
        }
        let best = best.expect("non-terminal states have a legal move");
        self.table.insert(key, best);
        Ok(best)
    }

    /// Values of every legal move, in move order.
    pub fn move_values(&self, state: &GameState) -> Result<Vec<(Move, Payoff)>, SolveError> {
        self.symmetry.check_sound(state.graph())?;
        let moves = state.legal_moves();
        if self.parallel_root {
            moves
                .par_iter()
                .map(|&mv| Ok((mv, self.value_rec(&state.apply_unchecked(mv))?)))
                .collect()
        } else {
            moves
                .iter()
                .map(|&mv| Ok((mv, self.value_rec(&state.apply_unchecked(mv))?)))
                .collect()
        }
    }

    /// Optimal move for the player to move; lowest move ordinal among ties.
    pub fn best_move(&self, state: &GameState) -> Result<Option<(Move, Payoff)>, SolveError> {
        if state.is_terminal() {
            return Ok(None);
        }
        let values = self.move_values(state)?;
        Ok(pick_best(state.to_move(), values))
    }

    pub fn solve(&self, state: &GameState) -> Result<SolveResult, SolveError> {
        let root = self.best_move(state)?;
        let value = match root {
            Some((_, v)) => v,
            None => state.payoff(),
        };
        let mut line = Vec::new();
        let mut cur = state.clone();
        while let Some((mv, _)) = self.best_move(&cur)? {
            line.push(mv);
            cur = cur.apply_unchecked(mv);
        }
        Ok(SolveResult {
            value,
            best_move: root.map(|(m, _)| m),
            principal_line: line,
            nodes_expanded: self.nodes_expanded(),
            table_hits: self.table_hits(),
        })
    }
}

fn pick_best(mover: Player, values: Vec<(Move, Payoff)>) -> Option<(Move, Payoff)> {
    let mut best: Option<(Move, Payoff)> = None;
    for (mv, v) in values {
        let better = match best {
            None => true,
            Some((_, b)) => match mover {
                Player::Lata => v > b,
                Player::Raj => v < b,
            },
        };
        if better {
            best = Some((mv, v));
        }
    }
    best
}

/// One-shot exact solve with a fresh table.
pub fn solve(
    state: &GameState,
    symmetry: SymmetryGroup,
    limits: SearchLimits,
) -> Result<SolveResult, SolveError> {
    Solver::new(symmetry, limits).solve(state)
}

/// Decides whether Lata can force a payoff of at least `threshold`.
///
/// Equivalently, Raj can hold the payoff strictly below `threshold` exactly
/// when this returns false. The memo table is per threshold and reused
/// across queries.
pub struct ThresholdSearch {
    symmetry: SymmetryGroup,
    threshold: Payoff,
    table: DashMap<CanonicalKey, bool>,
    budget: Budget,
}

impl ThresholdSearch {
    pub fn new(symmetry: SymmetryGroup, threshold: Payoff, limits: SearchLimits) -> Self {
        Self {
            symmetry,
            threshold,
            table: DashMap::new(),
            budget: Budget::new(limits),
        }
    }

    pub fn threshold(&self) -> Payoff {
        self.threshold
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.budget.nodes.load(Ordering::Relaxed)
    }

    pub fn lata_reaches(&self, state: &GameState) -> Result<bool, SolveError> {
        self.symmetry.check_sound(state.graph())?;
        self.reach_rec(state)
    }

    fn reach_rec(&self, state: &GameState) -> Result<bool, SolveError> {
        if state.is_terminal() {
            return Ok(state.payoff() >= self.threshold);
        }
        let key = key_unchecked(state, self.symmetry);
        if let Some(v) = self.table.get(&key) {
            self.budget.hit();
            return Ok(*v);
        }
        self.budget.tick()?;
        let lata = state.to_move() == Player::Lata;
        let mut moves = state.legal_moves();
        order_moves(state, &mut moves);
        let mut result = !lata;
        for mv in moves {
            let r = self.reach_rec(&state.apply_unchecked(mv))?;
            if r == lata {
                result = lata;
                break;
            }
        }
        self.table.insert(key, result);
        Ok(result)
    }

    /// First legal move (in move order) that keeps `player` on the good side
    /// of the threshold: `>= threshold` for Lata, `< threshold` for Raj.
    pub fn securing_move(&self, state: &GameState) -> Result<Option<Move>, SolveError> {
        self.symmetry.check_sound(state.graph())?;
        if state.is_terminal() {
            return Ok(None);
        }
        let lata = state.to_move() == Player::Lata;
        for mv in state.legal_moves() {
            if self.reach_rec(&state.apply_unchecked(mv))? == lata {
                return Ok(Some(mv));
            }
        }
        Ok(None)
    }
}

/// Search order for the yes/no search: replies next to enemy troops first,
/// larger stacks before smaller ones. Only affects speed.
fn order_moves(state: &GameState, moves: &mut [Move]) {
    let mover = state.to_move();
    moves.sort_by_key(|mv| match *mv {
        Move::Place { vertex, count } => {
            let contested = state
                .graph()
                .neighbors(vertex)
                .iter()
                .any(|&u| state.owner(u) == Some(mover.opponent()));
            (u8::from(!contested), u32::MAX - count, vertex)
        }
        Move::Attack { vertex } => (0, 0, vertex),
        _ => (2, 0, 0),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;
    use crate::rules::{GameResult, RuleConfig};

    fn start(f: GraphFamily, t: u32) -> GameState {
        GameState::new(f.generate().unwrap(), t, t, RuleConfig::standard()).unwrap()
    }

    #[test]
    fn two_edges_three_troops_is_a_draw() {
        let s = start(GraphFamily::Matching(2), 3);
        let r = solve(&s, SymmetryGroup::MatchingEdges, SearchLimits::unlimited()).unwrap();
        assert_eq!(r.value.result(), GameResult::Draw);
        assert_eq!(r.value, Payoff::DRAW);
    }

    #[test]
    fn triangle_is_a_draw() {
        let s = start(GraphFamily::Cycle(3), 2);
        let r = solve(&s, SymmetryGroup::CycleDihedral, SearchLimits::unlimited()).unwrap();
        assert_eq!(r.value.result(), GameResult::Draw);
    }

    #[test]
    fn principal_line_replays_to_value() {
        let s = start(GraphFamily::Path(4), 3);
        let r = solve(&s, SymmetryGroup::Identity, SearchLimits::unlimited()).unwrap();
        let end = s.replay(&r.principal_line).unwrap();
        assert!(end.is_terminal());
        assert_eq!(end.payoff(), r.value);
        assert_eq!(r.best_move, r.principal_line.first().copied());
    }

    #[test]
    fn terminal_state_has_no_best_move() {
        let s = start(GraphFamily::Complete(1), 0);
        let end = s
            .replay(&[
                Move::PassPlacement,
                Move::PassPlacement,
                Move::PassAttack,
                Move::PassAttack,
            ])
            .unwrap();
        let r = solve(&end, SymmetryGroup::Identity, SearchLimits::unlimited()).unwrap();
        assert_eq!(r.best_move, None);
        assert!(r.principal_line.is_empty());
    }

    #[test]
    fn node_limit_is_reported() {
        let s = start(GraphFamily::Cycle(5), 3);
        let err = solve(&s, SymmetryGroup::Identity, SearchLimits::nodes(10)).unwrap_err();
        assert!(matches!(err, SolveError::LimitExceeded { .. }));
    }

    #[test]
    fn symmetry_does_not_change_values() {
        for (f, g) in [
            (GraphFamily::Matching(2), SymmetryGroup::MatchingEdges),
            (GraphFamily::Cycle(4), SymmetryGroup::CycleDihedral),
            (GraphFamily::Cycle(5), SymmetryGroup::CycleDihedral),
        ] {
            for t in 1..=3 {
                let s = start(f, t);
                let a = Solver::new(SymmetryGroup::Identity, SearchLimits::unlimited())
                    .value(&s)
                    .unwrap();
                let b = Solver::new(g, SearchLimits::unlimited()).value(&s).unwrap();
                assert_eq!(a, b, "{f} T={t}");
            }
        }
    }

    #[test]
    fn parallel_root_matches_sequential() {
        let s = start(GraphFamily::Cycle(5), 3);
        let a = Solver::new(SymmetryGroup::Identity, SearchLimits::unlimited())
            .solve(&s)
            .unwrap();
        let b = Solver::new(SymmetryGroup::Identity, SearchLimits::unlimited())
            .with_parallel_root(true)
            .solve(&s)
            .unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.principal_line, b.principal_line);
    }

    #[test]
    fn threshold_search_agrees_with_exact_value() {
        for f in [GraphFamily::Matching(2), GraphFamily::Cycle(4), GraphFamily::Path(3)] {
            for t in 1..=3 {
                let s = start(f, t);
                let v = Solver::new(SymmetryGroup::Identity, SearchLimits::unlimited())
                    .value(&s)
                    .unwrap();
                for th in [
                    Payoff::new(0, 0),
                    Payoff::new(0, 1),
                    Payoff::new(1, i64::MIN),
                    Payoff::new(-1, i64::MIN),
                ] {
                    let ts = ThresholdSearch::new(
                        SymmetryGroup::Identity,
                        th,
                        SearchLimits::unlimited(),
                    );
                    assert_eq!(ts.lata_reaches(&s).unwrap(), v >= th, "{f} T={t} {th}");
                }
            }
        }
    }

    #[test]
    fn securing_move_respects_threshold() {
        let s = start(GraphFamily::Matching(2), 3);
        let ts = ThresholdSearch::new(
            SymmetryGroup::MatchingEdges,
            Payoff::DRAW,
            SearchLimits::unlimited(),
        );
        let mv = ts.securing_move(&s).unwrap().expect("Lata can draw");
        let solver = Solver::new(SymmetryGroup::Identity, SearchLimits::unlimited());
        assert!(solver.value(&s.apply(mv).unwrap()).unwrap() >= Payoff::DRAW);
    }
}
