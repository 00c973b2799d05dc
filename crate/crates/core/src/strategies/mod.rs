//! Scripted strategies for matchings, short cycles and the single-troop
//! variant, behind one contract: given a state and the strategy's private
//! memory, produce the next move.
//!
//! Memory carries the relabeling from the names used in the scripts (`w`,
//! `p`, `v_1`, ...) to real vertex ids. [`observe`] extends it after each
//! opponent move; [`next_move`] reads it. When a script has nothing to say
//! about a position it returns [`StrategyError::Unspecified`] instead of
//! improvising; callers decide what to do about that (see
//! [`StrategyPlayer`] and the verifier).

mod cycles;
mod matching;
mod micro;
pub mod tables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::StrategyError;
use crate::graph::{Graph, GraphFamily, Vertex};
use crate::rules::{GameState, Move, Payoff, Phase, Player, RuleConfig};
use crate::solver::{SearchLimits, Solver, SymmetryGroup};

pub(crate) use matching::{InductionRun, TableRun};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyId {
    RajMirrorMatching,
    LataSparseMatching,
    LataTwoEdges,
    RajThreeEdges,
    RajFourEdges,
    RajFourEdgesStrong,
    RajMatchingInduction,
    LataTriangle,
    LataC4,
    RajC4,
    LataC5,
    RajC5,
    MicroFirstPathMirror,
    MicroSecondOddcycleMirror,
}

impl StrategyId {
    pub const ALL: [StrategyId; 14] = [
        StrategyId::RajMirrorMatching,
        StrategyId::LataSparseMatching,
        StrategyId::LataTwoEdges,
        StrategyId::RajThreeEdges,
        StrategyId::RajFourEdges,
        StrategyId::RajFourEdgesStrong,
        StrategyId::RajMatchingInduction,
        StrategyId::LataTriangle,
        StrategyId::LataC4,
        StrategyId::RajC4,
        StrategyId::LataC5,
        StrategyId::RajC5,
        StrategyId::MicroFirstPathMirror,
        StrategyId::MicroSecondOddcycleMirror,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyId::RajMirrorMatching => "raj_mirror_matching",
            StrategyId::LataSparseMatching => "lata_sparse_matching",
            StrategyId::LataTwoEdges => "lata_two_edges",
            StrategyId::RajThreeEdges => "raj_three_edges",
            StrategyId::RajFourEdges => "raj_four_edges",
            StrategyId::RajFourEdgesStrong => "raj_four_edges_strong",
            StrategyId::RajMatchingInduction => "raj_matching_induction",
            StrategyId::LataTriangle => "lata_triangle",
            StrategyId::LataC4 => "lata_c4",
            StrategyId::RajC4 => "raj_c4",
            StrategyId::LataC5 => "lata_c5",
            StrategyId::RajC5 => "raj_c5",
            StrategyId::MicroFirstPathMirror => "micro_first_path_mirror",
            StrategyId::MicroSecondOddcycleMirror => "micro_second_oddcycle_mirror",
        }
    }

    /// The player the strategy plays for.
    pub fn role(self) -> Player {
        match self {
            StrategyId::LataSparseMatching
            | StrategyId::LataTwoEdges
            | StrategyId::LataTriangle
            | StrategyId::LataC4
            | StrategyId::LataC5
            | StrategyId::MicroFirstPathMirror => Player::Lata,
            _ => Player::Raj,
        }
    }

    pub fn is_micro(self) -> bool {
        matches!(
            self,
            StrategyId::MicroFirstPathMirror | StrategyId::MicroSecondOddcycleMirror
        )
    }

    /// Rules the strategy is written for.
    pub fn rule_config(self) -> RuleConfig {
        if self.is_micro() {
            RuleConfig::micro()
        } else {
            RuleConfig::standard()
        }
    }

    /// Strategies whose placement script only ever distinguishes untouched
    /// edges by id when they are interchangeable, so the verifier may treat
    /// opponent moves onto untouched edges as one class.
    pub fn matching_equivariant(self) -> bool {
        matches!(
            self,
            StrategyId::RajMirrorMatching
                | StrategyId::LataSparseMatching
                | StrategyId::LataTwoEdges
                | StrategyId::RajThreeEdges
                | StrategyId::RajFourEdges
                | StrategyId::RajFourEdgesStrong
                | StrategyId::RajMatchingInduction
        )
    }

    /// Attack-phase moves come from the script (the mirror strategies) rather
    /// than from exact search.
    pub fn scripted_attacks(self) -> bool {
        self.is_micro()
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StrategyId {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| StrategyError::UnknownId(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    AtLeastDraw,
    Win,
    StrongWin,
}

impl Guarantee {
    /// Threshold for the yes/no search: `player` meets the guarantee exactly
    /// when `payoff >= t` (Lata) or `payoff < t` (Raj).
    pub fn threshold(self, player: Player) -> Payoff {
        match (player, self) {
            (Player::Lata, Guarantee::AtLeastDraw) => Payoff::new(0, 0),
            (Player::Lata, Guarantee::Win) => Payoff::new(0, 1),
            (Player::Lata, Guarantee::StrongWin) => Payoff::new(2, i64::MIN),
            (Player::Raj, Guarantee::AtLeastDraw) => Payoff::new(0, 1),
            (Player::Raj, Guarantee::Win) => Payoff::new(0, 0),
            (Player::Raj, Guarantee::StrongWin) => Payoff::new(-1, i64::MIN),
        }
    }

    pub fn satisfied(self, player: Player, payoff: Payoff) -> bool {
        let t = self.threshold(player);
        match player {
            Player::Lata => payoff >= t,
            Player::Raj => payoff < t,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Guarantee::AtLeastDraw => "at_least_draw",
            Guarantee::Win => "win",
            Guarantee::StrongWin => "strong_win",
        }
    }
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-game private state of a strategy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StrategyMemory {
    pub(crate) script: Script,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) enum Script {
    #[default]
    Stateless,
    Table(TableRun),
    Induction(InductionRun),
    /// Cycle orientation: `v_k = anchor + dir * (k - 1)` modulo `n`.
    Cycle { anchor: Option<Vertex>, dir: i8 },
    /// Last opponent move, for the mirror strategies.
    Micro { last: Option<Move> },
}

impl StrategyMemory {
    /// Vertices the memory refers to by name. The verifier never merges
    /// opponent moves that touch these.
    pub fn bound_vertices(&self) -> Vec<Vertex> {
        match &self.script {
            Script::Table(run) => run.bound_vertices(),
            Script::Induction(run) => run.bound_vertices(),
            Script::Cycle { anchor, .. } => anchor.iter().copied().collect(),
            _ => Vec::new(),
        }
    }

    /// Human-readable summary of the bindings, for logs and the API.
    pub fn describe(&self) -> String {
        match &self.script {
            Script::Stateless => String::new(),
            Script::Table(run) => run.describe(),
            Script::Induction(run) => run.describe(),
            Script::Cycle { anchor, dir } => match anchor {
                Some(a) if *dir != 0 => format!("v1={a} dir={dir}"),
                Some(a) => format!("v1={a}"),
                None => String::new(),
            },
            Script::Micro { last } => last.map(|m| format!("last={m}")).unwrap_or_default(),
        }
    }
}

fn budgets_equal(budgets: (u32, u32)) -> Option<u32> {
    (budgets.0 == budgets.1).then_some(budgets.0)
}

fn is_family(graph: &Graph, family: GraphFamily) -> bool {
    family.generate().is_ok_and(|g| &g == graph)
}

/// The guarantee `id` carries on this board and these budgets
/// (`budgets = (T_L, T_R)`), or `None` when its hypotheses fail.
pub fn applicability(id: StrategyId, graph: &Graph, budgets: (u32, u32)) -> Option<Guarantee> {
    let (tl, tr) = budgets;
    let n = graph.vertex_count();
    let matching = graph.is_perfect_matching();
    let m = n / 2;
    match id {
        StrategyId::RajMirrorMatching => {
            (matching && budgets_equal(budgets).is_some()).then_some(Guarantee::AtLeastDraw)
        }
        StrategyId::LataSparseMatching => budgets_equal(budgets)
            .filter(|&t| matching && m >= 2 * t)
            .map(|_| Guarantee::AtLeastDraw),
        StrategyId::LataTwoEdges => (matching && (1..=2).contains(&m) && tl == tr && tl >= 1)
            .then_some(Guarantee::AtLeastDraw),
        StrategyId::RajThreeEdges => {
            (matching && m == 3 && tl == tr && tl >= 9).then_some(Guarantee::Win)
        }
        StrategyId::RajFourEdges => {
            (matching && m == 4 && tl == tr && tl >= 10).then_some(Guarantee::Win)
        }
        StrategyId::RajFourEdgesStrong => {
            (matching && m == 4 && tr >= 10 && tl <= 9).then_some(Guarantee::StrongWin)
        }
        StrategyId::RajMatchingInduction => {
            if !matching || m < 4 || tr < m + 6 {
                None
            } else if tl == tr {
                Some(Guarantee::Win)
            } else if tl < tr {
                Some(Guarantee::StrongWin)
            } else {
                None
            }
        }
        StrategyId::LataTriangle => (is_family(graph, GraphFamily::Cycle(3)) && tl == tr)
            .then_some(Guarantee::AtLeastDraw),
        StrategyId::LataC4 | StrategyId::RajC4 => {
            (is_family(graph, GraphFamily::Cycle(4)) && tl == tr && tl >= 1)
                .then_some(Guarantee::AtLeastDraw)
        }
        StrategyId::LataC5 | StrategyId::RajC5 => {
            (is_family(graph, GraphFamily::Cycle(5)) && tl == tr && tl >= 2)
                .then_some(Guarantee::AtLeastDraw)
        }
        StrategyId::MicroFirstPathMirror => (n >= 1
            && is_family(graph, GraphFamily::Path(n))
            && tl == tr)
            .then_some(Guarantee::AtLeastDraw),
        StrategyId::MicroSecondOddcycleMirror => (n >= 5
            && n % 2 == 1
            && is_family(graph, GraphFamily::Cycle(n))
            && tl == tr)
            .then_some(Guarantee::AtLeastDraw),
    }
}

/// Fresh memory for a game starting at `state`.
pub fn initial_memory(id: StrategyId, state: &GameState) -> StrategyMemory {
    let script = match id {
        StrategyId::RajThreeEdges => Script::Table(TableRun::standalone(
            tables::TableKind::ThreeEdges,
            false,
            state.graph(),
        )),
        StrategyId::RajFourEdges => Script::Table(TableRun::standalone(
            tables::TableKind::FourEdges,
            false,
            state.graph(),
        )),
        StrategyId::RajFourEdgesStrong => Script::Table(TableRun::standalone(
            tables::TableKind::FourEdges,
            true,
            state.graph(),
        )),
        StrategyId::RajMatchingInduction => Script::Induction(InductionRun::new(state)),
        StrategyId::LataC5 => Script::Cycle {
            anchor: Some(0),
            dir: 0,
        },
        StrategyId::RajC5 => Script::Cycle {
            anchor: None,
            dir: 1,
        },
        StrategyId::MicroFirstPathMirror | StrategyId::MicroSecondOddcycleMirror => {
            Script::Micro { last: None }
        }
        _ => Script::Stateless,
    };
    StrategyMemory { script }
}

/// Extends the relabeling after the opponent plays `mv` from `before`.
pub fn relabel(
    id: StrategyId,
    memory: &StrategyMemory,
    mv: Move,
    before: &GameState,
) -> Result<StrategyMemory, StrategyError> {
    let mut next = memory.clone();
    match &mut next.script {
        Script::Table(run) => run.observe(mv, before)?,
        Script::Induction(run) => run.observe(mv, before)?,
        Script::Cycle { .. } => cycles::observe(id, &mut next, mv, before)?,
        Script::Micro { last } => *last = Some(mv),
        Script::Stateless => {}
    }
    Ok(next)
}

/// Node budget for the exact attack-phase search used by strategies that do
/// not script their attacks.
pub const ATTACK_NODE_LIMIT: u64 = 2_000_000;

/// The strategy's next move in `state`, which must have the strategy's
/// player to move.
pub fn next_move(
    id: StrategyId,
    state: &GameState,
    memory: &StrategyMemory,
) -> Result<(Move, StrategyMemory), StrategyError> {
    if state.is_terminal() {
        return Err(StrategyError::NotApplicable("the game is over".into()));
    }
    if state.to_move() != id.role() {
        return Err(StrategyError::NotApplicable(format!(
            "{id} plays {}, but {} is to move",
            id.role(),
            state.to_move()
        )));
    }
    let mut memory = memory.clone();
    if state.phase() == Phase::Placement && !state.can_place(id.role()) {
        return Ok((Move::PassPlacement, memory));
    }
    if state.phase() == Phase::Attack && !id.scripted_attacks() {
        return Ok((best_attack(state)?, memory));
    }
    let mv = match id {
        StrategyId::RajMirrorMatching => matching::mirror(state)?,
        StrategyId::LataSparseMatching => matching::sparse(state)?,
        StrategyId::LataTwoEdges => matching::two_edges(state)?,
        StrategyId::RajThreeEdges | StrategyId::RajFourEdges | StrategyId::RajFourEdgesStrong => {
            match &mut memory.script {
                Script::Table(run) => run.next(state)?,
                _ => return Err(StrategyError::Inconsistent("missing table memory".into())),
            }
        }
        StrategyId::RajMatchingInduction => match &mut memory.script {
            Script::Induction(run) => run.next(state)?,
            _ => return Err(StrategyError::Inconsistent("missing induction memory".into())),
        },
        StrategyId::LataTriangle => cycles::triangle(state)?,
        StrategyId::LataC4 => cycles::lata_c4(state)?,
        StrategyId::RajC4 => cycles::raj_c4(state)?,
        StrategyId::LataC5 => cycles::lata_c5(state, &memory)?,
        StrategyId::RajC5 => cycles::raj_c5(state, &memory)?,
        StrategyId::MicroFirstPathMirror => micro::path_mirror(state, &memory)?,
        StrategyId::MicroSecondOddcycleMirror => micro::cycle_mirror(state, &memory)?,
    };
    Ok((mv, memory))
}

fn best_attack(state: &GameState) -> Result<Move, StrategyError> {
    let solver = Solver::new(SymmetryGroup::Identity, SearchLimits::nodes(ATTACK_NODE_LIMIT));
    match solver.best_move(state)? {
        Some((mv, _)) => Ok(mv),
        None => Err(StrategyError::NotApplicable("the game is over".into())),
    }
}

/// Lowest empty vertex, taking everything that is left when it is the last
/// one. Used wherever a script says the remaining troops go "in order".
pub(crate) fn leftover(state: &GameState) -> Result<Move, StrategyError> {
    let player = state.to_move();
    let empty: Vec<Vertex> = state.empty_vertices().collect();
    let budget = state.budget(player);
    match empty.as_slice() {
        [] => Ok(Move::PassPlacement),
        [only] => Ok(capped(state, *only, budget)),
        [first, ..] => Ok(capped(state, *first, 1)),
    }
}

/// `place(v, count)` clamped to the per-move cap and the remaining budget.
pub(crate) fn capped(state: &GameState, v: Vertex, count: u32) -> Move {
    let mut c = count.min(state.budget(state.to_move()));
    if let Some(cap) = state.config().placement_cap {
        c = c.min(cap);
    }
    Move::place(v, c.max(1))
}

/// Plays a strategy inside a live game: keeps the memory current and falls
/// back to exact search wherever the script is silent.
pub struct StrategyPlayer {
    id: StrategyId,
    memory: StrategyMemory,
    off_script: bool,
    fallback_limits: SearchLimits,
    fallbacks: u32,
}

impl StrategyPlayer {
    pub fn new(id: StrategyId, initial: &GameState, fallback_limits: SearchLimits) -> Self {
        Self {
            id,
            memory: initial_memory(id, initial),
            off_script: false,
            fallback_limits,
            fallbacks: 0,
        }
    }

    pub fn id(&self) -> StrategyId {
        self.id
    }

    pub fn memory(&self) -> &StrategyMemory {
        &self.memory
    }

    /// Number of moves taken from exact search instead of the script.
    pub fn fallbacks(&self) -> u32 {
        self.fallbacks
    }

    pub fn off_script(&self) -> bool {
        self.off_script
    }

    /// Moves made by the strategy's own side must go through here.
    pub fn choose(&mut self, state: &GameState) -> Result<Move, StrategyError> {
        if !self.off_script {
            match next_move(self.id, state, &self.memory) {
                Ok((mv, memory)) if state.check(mv).is_ok() => {
                    self.memory = memory;
                    return Ok(mv);
                }
                Ok(_) | Err(StrategyError::Unspecified(_)) => self.off_script = true,
                Err(e) => return Err(e),
            }
        }
        self.fallbacks += 1;
        let group = SymmetryGroup::natural_for(state.graph());
        let solver = Solver::new(group, self.fallback_limits);
        match solver.best_move(state)? {
            Some((mv, _)) => Ok(mv),
            None => Err(StrategyError::NotApplicable("the game is over".into())),
        }
    }

    /// Every opponent move must be reported here before the next `choose`.
    /// A move the script cannot follow sends the player off script.
    pub fn observe(&mut self, mv: Move, before: &GameState) {
        if self.off_script {
            return;
        }
        match relabel(self.id, &self.memory, mv, before) {
            Ok(memory) => self.memory = memory,
            Err(_) => self.off_script = true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_as_strings() {
        for id in StrategyId::ALL {
            assert_eq!(id.as_str().parse::<StrategyId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert!("raj_magic".parse::<StrategyId>().is_err());
    }

    #[test]
    fn guarantees_are_ordered() {
        assert!(Guarantee::StrongWin > Guarantee::Win);
        assert!(Guarantee::Win > Guarantee::AtLeastDraw);
    }

    #[test]
    fn guarantee_thresholds() {
        let draw = Payoff::DRAW;
        let troop_loss = Payoff::new(0, -1);
        let one_down = Payoff::new(-1, 5);
        let two_down = Payoff::new(-2, 0);
        assert!(Guarantee::AtLeastDraw.satisfied(Player::Raj, draw));
        assert!(!Guarantee::Win.satisfied(Player::Raj, draw));
        assert!(Guarantee::Win.satisfied(Player::Raj, troop_loss));
        assert!(!Guarantee::StrongWin.satisfied(Player::Raj, one_down));
        assert!(Guarantee::StrongWin.satisfied(Player::Raj, two_down));
        assert!(Guarantee::AtLeastDraw.satisfied(Player::Lata, draw));
        assert!(!Guarantee::AtLeastDraw.satisfied(Player::Lata, troop_loss));
        assert!(Guarantee::StrongWin.satisfied(Player::Lata, Payoff::new(2, -9)));
    }

    #[test]
    fn applicability_examples() {
        let m7 = GraphFamily::Matching(7).generate().unwrap();
        assert_eq!(
            applicability(StrategyId::RajMatchingInduction, &m7, (13, 13)),
            Some(Guarantee::Win)
        );
        let m4 = GraphFamily::Matching(4).generate().unwrap();
        assert_eq!(
            applicability(StrategyId::RajFourEdgesStrong, &m4, (9, 10)),
            Some(Guarantee::StrongWin)
        );
        let c6 = GraphFamily::Cycle(6).generate().unwrap();
        assert_eq!(applicability(StrategyId::LataC5, &c6, (7, 7)), None);
        let m3 = GraphFamily::Matching(3).generate().unwrap();
        assert_eq!(applicability(StrategyId::RajThreeEdges, &m3, (8, 8)), None);
        assert_eq!(
            applicability(StrategyId::LataSparseMatching, &m3, (2, 2)),
            None
        );
    }
}
