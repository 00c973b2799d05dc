//! Rules of Aggression as an immutable-state transition system.
//!
//! A [`GameState`] is a value: [`GameState::apply`] returns a fresh successor
//! and never mutates its receiver. Placement passing is forced-only (a player
//! who can place must place at least one troop), the first player to pass in
//! the placement phase leads the attack phase, and a legal attack always
//! succeeds, leaving the attacked vertex neutral for the rest of the game.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::graph::{Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    /// Moves first.
    Lata,
    Raj,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::Lata, Player::Raj];

    pub fn opponent(self) -> Player {
        match self {
            Player::Lata => Player::Raj,
            Player::Raj => Player::Lata,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Lata => 0,
            Player::Raj => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Lata => "Lata",
            Player::Raj => "Raj",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackPolicy {
    /// A player with a legal attack must attack.
    #[default]
    Mandatory,
    /// Passing in the attack phase is always allowed.
    Optional,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleConfig {
    #[serde(default)]
    pub attack_policy: AttackPolicy,
    /// Maximum troops per placement move; `Some(1)` is Micro Aggression.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement_cap: Option<u32>,
}

impl RuleConfig {
    pub fn standard() -> Self {
        Self::default()
    }

    pub fn micro() -> Self {
        Self {
            attack_policy: AttackPolicy::Mandatory,
            placement_cap: Some(1),
        }
    }

    pub fn with_policy(mut self, policy: AttackPolicy) -> Self {
        self.attack_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<(), RuleError> {
        match self.placement_cap {
            Some(0) => Err(RuleError::BadCap),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Placement,
    Attack,
    Terminal,
}

impl Phase {
    fn name(self) -> &'static str {
        match self {
            Phase::Placement => "placement",
            Phase::Attack => "attack",
            Phase::Terminal => "terminal",
        }
    }
}

/// A move. The derived order is the solver's tie-breaking order: placements
/// (by vertex, then count), the placement pass, attacks (by vertex), the
/// attack pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Move {
    Place { vertex: Vertex, count: u32 },
    PassPlacement,
    Attack { vertex: Vertex },
    PassAttack,
}

impl Move {
    pub fn place(vertex: Vertex, count: u32) -> Self {
        Move::Place { vertex, count }
    }

    pub fn attack(vertex: Vertex) -> Self {
        Move::Attack { vertex }
    }

    pub fn vertex(&self) -> Option<Vertex> {
        match *self {
            Move::Place { vertex, .. } | Move::Attack { vertex } => Some(vertex),
            _ => None,
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Move::PassPlacement | Move::PassAttack)
    }

    pub fn relabeled(&self, perm: &[Vertex]) -> Self {
        match *self {
            Move::Place { vertex, count } => Move::Place {
                vertex: perm[vertex as usize],
                count,
            },
            Move::Attack { vertex } => Move::Attack {
                vertex: perm[vertex as usize],
            },
            other => other,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Place { vertex, count } => write!(f, "place {count}@{vertex}"),
            Move::PassPlacement => f.write_str("pass"),
            Move::Attack { vertex } => write!(f, "attack {vertex}"),
            Move::PassAttack => f.write_str("pass-attack"),
        }
    }
}

/// Renders a move sequence as `place 3@0, place 3@1, ...`.
pub fn format_line(line: &[Move]) -> String {
    line.iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameResult {
    LataWin,
    RajWin,
    Draw,
}

impl GameResult {
    pub fn winner(self) -> Option<Player> {
        match self {
            GameResult::LataWin => Some(Player::Lata),
            GameResult::RajWin => Some(Player::Raj),
            GameResult::Draw => None,
        }
    }
}

impl fmt::Display for GameResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameResult::LataWin => "LataWin",
            GameResult::RajWin => "RajWin",
            GameResult::Draw => "Draw",
        })
    }
}

/// Lata-minus-Raj score, ordered lexicographically (territories first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Payoff {
    pub territory_diff: i32,
    pub troop_diff: i64,
}

impl Payoff {
    pub const DRAW: Payoff = Payoff {
        territory_diff: 0,
        troop_diff: 0,
    };

    pub fn new(territory_diff: i32, troop_diff: i64) -> Self {
        Self {
            territory_diff,
            troop_diff,
        }
    }

    pub fn result(&self) -> GameResult {
        match self.cmp(&Payoff::DRAW) {
            std::cmp::Ordering::Greater => GameResult::LataWin,
            std::cmp::Ordering::Less => GameResult::RajWin,
            std::cmp::Ordering::Equal => GameResult::Draw,
        }
    }

    pub fn is_strong_win(&self) -> bool {
        self.territory_diff.abs() >= 2
    }

    pub fn negated(&self) -> Self {
        Payoff::new(-self.territory_diff, -self.troop_diff)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.territory_diff, self.troop_diff)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    /// Indexed by [`Player::index`].
    pub territories: [u32; 2],
    pub surviving_troops: [u32; 2],
    pub result: GameResult,
    pub strong_win: bool,
}

impl Outcome {
    /// Scores a board given per-player territory and troop totals.
    pub fn from_totals(territories: [u32; 2], surviving_troops: [u32; 2]) -> Self {
        let payoff = Payoff::new(
            territories[0] as i32 - territories[1] as i32,
            surviving_troops[0] as i64 - surviving_troops[1] as i64,
        );
        let result = payoff.result();
        Outcome {
            territories,
            surviving_troops,
            result,
            strong_win: result != GameResult::Draw && payoff.is_strong_win(),
        }
    }

    pub fn payoff(&self) -> Payoff {
        Payoff::new(
            self.territories[0] as i32 - self.territories[1] as i32,
            self.surviving_troops[0] as i64 - self.surviving_troops[1] as i64,
        )
    }

    pub fn margin_for(&self, player: Player) -> i32 {
        let d = self.territories[0] as i32 - self.territories[1] as i32;
        match player {
            Player::Lata => d,
            Player::Raj => -d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    graph: Arc<Graph>,
    owner: Vec<Option<Player>>,
    troops: Vec<u32>,
    budget: [u32; 2],
    initial_budget: [u32; 2],
    phase: Phase,
    to_move: Player,
    first_passer: Option<Player>,
    placement_passes: u8,
    attack_passes: u8,
    config: RuleConfig,
}

/// Starts a game on `graph` with an empty board and Lata to move.
pub fn new_game(
    graph: impl Into<Arc<Graph>>,
    budget_lata: u32,
    budget_raj: u32,
    config: RuleConfig,
) -> Result<GameState, RuleError> {
    GameState::new(graph, budget_lata, budget_raj, config)
}

pub fn legal_moves(state: &GameState) -> Result<Vec<Move>, RuleError> {
    if state.is_terminal() {
        return Err(RuleError::GameOver);
    }
    Ok(state.legal_moves())
}

pub fn apply_move(state: &GameState, mv: Move) -> Result<GameState, RuleError> {
    state.apply(mv)
}

pub fn outcome(state: &GameState) -> Result<Outcome, RuleError> {
    state.outcome()
}

pub fn vulnerable_vertices(state: &GameState, victim: Player) -> Vec<Vertex> {
    state.vulnerable(victim)
}

impl GameState {
    pub fn new(
        graph: impl Into<Arc<Graph>>,
        budget_lata: u32,
        budget_raj: u32,
        config: RuleConfig,
    ) -> Result<Self, RuleError> {
        config.validate()?;
        let graph = graph.into();
        let n = graph.len();
        Ok(Self {
            graph,
            owner: vec![None; n],
            troops: vec![0; n],
            budget: [budget_lata, budget_raj],
            initial_budget: [budget_lata, budget_raj],
            phase: Phase::Placement,
            to_move: Player::Lata,
            first_passer: None,
            placement_passes: 0,
            attack_passes: 0,
            config,
        })
    }

    /// An attack-phase state built directly from a finished placement.
    /// Budgets are taken to be the placed totals, with nothing left to place.
    pub fn from_placement(
        graph: impl Into<Arc<Graph>>,
        lata: &[(Vertex, u32)],
        raj: &[(Vertex, u32)],
        leader: Player,
        config: RuleConfig,
    ) -> Result<Self, RuleError> {
        config.validate()?;
        let graph = graph.into();
        let n = graph.len();
        let mut owner = vec![None; n];
        let mut troops = vec![0; n];
        let mut totals = [0u32; 2];
        for (player, entries) in [(Player::Lata, lata), (Player::Raj, raj)] {
            for &(v, c) in entries {
                if v as usize >= n {
                    return Err(RuleError::NoSuchVertex(v));
                }
                if c == 0 {
                    return Err(RuleError::ZeroTroops);
                }
                if owner[v as usize].is_some() {
                    return Err(RuleError::Occupied(v));
                }
                owner[v as usize] = Some(player);
                troops[v as usize] = c;
                totals[player.index()] += c;
            }
        }
        Ok(Self {
            graph,
            owner,
            troops,
            budget: [0, 0],
            initial_budget: totals,
            phase: Phase::Attack,
            to_move: leader,
            first_passer: Some(leader),
            placement_passes: 2,
            attack_passes: 0,
            config,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn owner(&self, v: Vertex) -> Option<Player> {
        self.owner[v as usize]
    }

    pub fn troops(&self, v: Vertex) -> u32 {
        self.troops[v as usize]
    }

    pub fn owners(&self) -> &[Option<Player>] {
        &self.owner
    }

    pub fn troop_counts(&self) -> &[u32] {
        &self.troops
    }

    pub fn budget(&self, p: Player) -> u32 {
        self.budget[p.index()]
    }

    pub fn initial_budget(&self, p: Player) -> u32 {
        self.initial_budget[p.index()]
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn first_passer(&self) -> Option<Player> {
        self.first_passer
    }

    pub fn placement_passes(&self) -> u8 {
        self.placement_passes
    }

    pub fn attack_passes(&self) -> u8 {
        self.attack_passes
    }

    pub fn config(&self) -> RuleConfig {
        self.config
    }

    pub fn is_terminal(&self) -> bool {
        self.phase == Phase::Terminal
    }

    pub fn is_empty_vertex(&self, v: Vertex) -> bool {
        self.owner[v as usize].is_none()
    }

    pub fn empty_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.graph.vertices().filter(|&v| self.is_empty_vertex(v))
    }

    pub fn territories(&self, p: Player) -> u32 {
        self.owner.iter().filter(|o| **o == Some(p)).count() as u32
    }

    pub fn troops_on_board(&self, p: Player) -> u32 {
        self.owner
            .iter()
            .zip(&self.troops)
            .filter(|(o, _)| **o == Some(p))
            .map(|(_, t)| *t)
            .sum()
    }

    /// Troops of `attacker` adjacent to `v`.
    pub fn adjacent_strength(&self, v: Vertex, attacker: Player) -> u32 {
        self.graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.owner[u as usize] == Some(attacker))
            .map(|&u| self.troops[u as usize])
            .sum()
    }

    /// Whether `v` is occupied and its owner is strictly outnumbered by
    /// adjacent enemy troops.
    pub fn is_vulnerable(&self, v: Vertex) -> bool {
        match self.owner[v as usize] {
            Some(p) => self.adjacent_strength(v, p.opponent()) > self.troops[v as usize],
            None => false,
        }
    }

    /// Victim-owned vertices that the opponent could attack, ascending.
    pub fn vulnerable(&self, victim: Player) -> Vec<Vertex> {
        self.graph
            .vertices()
            .filter(|&v| self.owner[v as usize] == Some(victim) && self.is_vulnerable(v))
            .collect()
    }

    fn max_placement(&self, p: Player) -> u32 {
        let b = self.budget[p.index()];
        match self.config.placement_cap {
            Some(cap) => b.min(cap),
            None => b,
        }
    }

    pub fn can_place(&self, p: Player) -> bool {
        self.budget[p.index()] > 0 && self.empty_vertices().next().is_some()
    }

    /// All legal moves in ascending move order; empty only for terminal states.
    pub fn legal_moves(&self) -> Vec<Move> {
        match self.phase {
            Phase::Terminal => Vec::new(),
            Phase::Placement => {
                let p = self.to_move;
                let cap = self.max_placement(p);
                let mut moves = Vec::new();
                if cap > 0 {
                    for v in self.empty_vertices() {
                        moves.extend((1..=cap).map(|c| Move::place(v, c)));
                    }
                }
                if moves.is_empty() {
                    moves.push(Move::PassPlacement);
                }
                moves
            }
            Phase::Attack => {
                let mut moves: Vec<Move> = self
                    .vulnerable(self.to_move.opponent())
                    .into_iter()
                    .map(Move::attack)
                    .collect();
                if moves.is_empty() || self.config.attack_policy == AttackPolicy::Optional {
                    moves.push(Move::PassAttack);
                }
                moves
            }
        }
    }

    /// Checks `mv` against the rules, naming the violated rule on failure.
    pub fn check(&self, mv: Move) -> Result<(), RuleError> {
        let p = self.to_move;
        match (self.phase, mv) {
            (Phase::Terminal, _) => Err(RuleError::GameOver),
            (Phase::Placement, Move::Place { vertex, count }) => {
                if vertex >= self.graph.vertex_count() {
                    return Err(RuleError::NoSuchVertex(vertex));
                }
                if !self.is_empty_vertex(vertex) {
                    return Err(RuleError::Occupied(vertex));
                }
                if count == 0 {
                    return Err(RuleError::ZeroTroops);
                }
                let remaining = self.budget[p.index()];
                if count > remaining {
                    return Err(RuleError::OverBudget { count, remaining });
                }
                if let Some(cap) = self.config.placement_cap {
                    if count > cap {
                        return Err(RuleError::OverCap { count, cap });
                    }
                }
                Ok(())
            }
            (Phase::Placement, Move::PassPlacement) => {
                if self.can_place(p) {
                    Err(RuleError::PassWhilePlacementPossible)
                } else {
                    Ok(())
                }
            }
            (Phase::Attack, Move::Attack { vertex }) => {
                if vertex >= self.graph.vertex_count() {
                    return Err(RuleError::NoSuchVertex(vertex));
                }
                if self.owner[vertex as usize] != Some(p.opponent()) {
                    return Err(RuleError::NotOpponentVertex(vertex));
                }
                let strength = self.adjacent_strength(vertex, p);
                let defenders = self.troops[vertex as usize];
                if strength <= defenders {
                    return Err(RuleError::NotVulnerable {
                        vertex,
                        strength,
                        defenders,
                    });
                }
                Ok(())
            }
            (Phase::Attack, Move::PassAttack) => {
                if self.config.attack_policy == AttackPolicy::Mandatory
                    && !self.vulnerable(p.opponent()).is_empty()
                {
                    Err(RuleError::PassWhileAttackAvailable)
                } else {
                    Ok(())
                }
            }
            (phase, Move::Place { .. }) => Err(RuleError::WrongPhase("placing", phase.name())),
            (phase, Move::PassPlacement) => {
                Err(RuleError::WrongPhase("a placement pass", phase.name()))
            }
            (phase, Move::Attack { .. }) => Err(RuleError::WrongPhase("attacking", phase.name())),
            (phase, Move::PassAttack) => Err(RuleError::WrongPhase("an attack pass", phase.name())),
        }
    }

    /// Successor state after a legal move.
    pub fn apply(&self, mv: Move) -> Result<GameState, RuleError> {
        self.check(mv)?;
        Ok(self.apply_unchecked(mv))
    }

    /// Successor without the legality check; `mv` must come from
    /// [`GameState::legal_moves`].
    pub fn apply_unchecked(&self, mv: Move) -> GameState {
        let mut next = self.clone();
        let p = self.to_move;
        match mv {
            Move::Place { vertex, count } => {
                next.owner[vertex as usize] = Some(p);
                next.troops[vertex as usize] = count;
                next.budget[p.index()] -= count;
                next.placement_passes = 0;
                next.to_move = p.opponent();
            }
            Move::PassPlacement => {
                next.first_passer.get_or_insert(p);
                next.placement_passes += 1;
                if next.placement_passes >= 2 {
                    next.phase = Phase::Attack;
                    next.to_move = next.first_passer.unwrap_or(Player::Lata);
                    next.attack_passes = 0;
                } else {
                    next.to_move = p.opponent();
                }
            }
            Move::Attack { vertex } => {
                next.owner[vertex as usize] = None;
                next.troops[vertex as usize] = 0;
                next.attack_passes = 0;
                next.to_move = p.opponent();
            }
            Move::PassAttack => {
                next.attack_passes += 1;
                if next.attack_passes >= 2 {
                    next.phase = Phase::Terminal;
                } else {
                    next.to_move = p.opponent();
                }
            }
        }
        next
    }

    /// Score of the current board, whether or not the game is over.
    pub fn payoff(&self) -> Payoff {
        Payoff::new(
            self.territories(Player::Lata) as i32 - self.territories(Player::Raj) as i32,
            self.troops_on_board(Player::Lata) as i64 - self.troops_on_board(Player::Raj) as i64,
        )
    }

    pub fn score(&self) -> Outcome {
        Outcome::from_totals(
            [self.territories(Player::Lata), self.territories(Player::Raj)],
            [
                self.troops_on_board(Player::Lata),
                self.troops_on_board(Player::Raj),
            ],
        )
    }

    pub fn outcome(&self) -> Result<Outcome, RuleError> {
        if self.is_terminal() {
            Ok(self.score())
        } else {
            Err(RuleError::NotTerminal)
        }
    }

    /// The same state with every vertex `v` renamed to `perm[v]`.
    /// `perm` must be an automorphism-free relabeling of the whole graph.
    pub fn relabeled(&self, perm: &[Vertex]) -> GameState {
        let mut next = self.clone();
        next.graph = Arc::new(self.graph.relabeled(perm));
        for v in self.graph.vertices() {
            let image = perm[v as usize] as usize;
            next.owner[image] = self.owner[v as usize];
            next.troops[image] = self.troops[v as usize];
        }
        next
    }

    /// Same state on a graph known to be identical (used when `perm` is an
    /// automorphism so the `Arc` can be shared).
    pub fn relabeled_by_automorphism(&self, perm: &[Vertex]) -> GameState {
        let mut next = self.clone();
        for v in self.graph.vertices() {
            let image = perm[v as usize] as usize;
            next.owner[image] = self.owner[v as usize];
            next.troops[image] = self.troops[v as usize];
        }
        next
    }

    /// Plays `line` from this state.
    pub fn replay<'a>(&self, line: impl IntoIterator<Item = &'a Move>) -> Result<GameState, RuleError> {
        let mut state = self.clone();
        for &mv in line {
            state = state.apply(mv)?;
        }
        Ok(state)
    }
}
