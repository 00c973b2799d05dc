//! A game in progress: engine state, the move log, and who plays which side.

use aggression_core::codec::StateSnapshot;
use aggression_core::strategies::{
    applicability, initial_memory, next_move, relabel, StrategyId, StrategyPlayer,
};
use aggression_core::verifier::Budgets;
use aggression_core::{
    Graph, GameState, Move, Payoff, Player, RuleConfig, RuleError, SearchLimits, SolveError,
    Solver, StrategyError, SymmetryGroup,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Who answers the human's moves. `None` means both sides are played by
/// whoever holds the session.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Opponent {
    Strategy(StrategyId),
    Solver,
    #[default]
    None,
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("it is {to_move}'s turn and the human plays {human}")]
    NotYourTurn { to_move: Player, human: Player },
    #[error("{0} cannot play here: {1}")]
    BadOpponent(StrategyId, String),
    #[error("opponent failed: {0}")]
    Opponent(#[from] StrategyError),
}

impl SessionError {
    /// Stable name for the rule a client broke, if any.
    pub fn rule(&self) -> Option<&'static str> {
        match self {
            SessionError::Rule(e) => Some(e.rule()),
            SessionError::NotYourTurn { .. } => Some("not_your_turn"),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HintSource {
    Solver,
    Strategy(StrategyId),
    /// Neither the solver nor any script produced a move in time.
    FirstLegal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hint {
    #[serde(rename = "move")]
    pub mv: Move,
    /// Exact game value, when the solver finished.
    pub value: Option<Payoff>,
    pub source: HintSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSnapshot {
    pub id: String,
    pub human: Player,
    pub opponent: Opponent,
    pub move_log: Vec<Move>,
    pub state: StateSnapshot,
}

/// Enough to rebuild a game: the board, the budgets, the rules and every move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameRecord {
    pub graph: Graph,
    pub budgets: Budgets,
    #[serde(default = "RuleConfig::standard")]
    pub rules: RuleConfig,
    pub moves: Vec<Move>,
}

impl GameRecord {
    pub fn initial(&self) -> Result<GameState, RuleError> {
        GameState::new(self.graph.clone(), self.budgets.lata, self.budgets.raj, self.rules)
    }

    /// Plays every move; a bad one is reported with its index.
    pub fn replay(&self) -> Result<GameState, (usize, RuleError)> {
        let mut state = self.initial().map_err(|e| (0, e))?;
        for (i, &mv) in self.moves.iter().enumerate() {
            state = state.apply(mv).map_err(|e| (i, e))?;
        }
        Ok(state)
    }
}

pub struct Session {
    id: String,
    initial: GameState,
    state: GameState,
    human: Player,
    opponent: Opponent,
    player: Option<StrategyPlayer>,
    limits: SearchLimits,
    log: Vec<Move>,
}

impl Session {
    /// Starts a session and lets the opponent move if it goes first.
    pub fn new(
        id: String,
        initial: GameState,
        human: Player,
        opponent: Opponent,
        limits: SearchLimits,
    ) -> Result<Self, SessionError> {
        let player = match opponent {
            Opponent::Strategy(sid) => {
                if sid.role() == human {
                    return Err(SessionError::BadOpponent(sid, format!("it plays {human}")));
                }
                let budgets = (
                    initial.initial_budget(Player::Lata),
                    initial.initial_budget(Player::Raj),
                );
                if applicability(sid, initial.graph(), budgets).is_none() {
                    return Err(SessionError::BadOpponent(
                        sid,
                        "board or budgets outside its hypotheses".into(),
                    ));
                }
                if initial.config() != sid.rule_config() {
                    return Err(SessionError::BadOpponent(sid, "different rule variant".into()));
                }
                Some(StrategyPlayer::new(sid, &initial, limits))
            }
            _ => None,
        };
        let mut session = Self {
            id,
            state: initial.clone(),
            initial,
            human,
            opponent,
            player,
            limits,
            log: Vec::new(),
        };
        session.advance()?;
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn initial(&self) -> &GameState {
        &self.initial
    }

    pub fn log(&self) -> &[Move] {
        &self.log
    }

    pub fn human(&self) -> Player {
        self.human
    }

    /// Applies the human's move, then the opponent's replies.
    pub fn play(&mut self, mv: Move) -> Result<(), SessionError> {
        if self.state.is_terminal() {
            return Err(RuleError::GameOver.into());
        }
        let to_move = self.state.to_move();
        if self.opponent != Opponent::None && to_move != self.human {
            return Err(SessionError::NotYourTurn {
                to_move,
                human: self.human,
            });
        }
        let next = self.state.apply(mv)?;
        if let Some(p) = &mut self.player {
            p.observe(mv, &self.state);
        }
        self.state = next;
        self.log.push(mv);
        self.advance()
    }

    fn advance(&mut self) -> Result<(), SessionError> {
        while !self.state.is_terminal()
            && self.opponent != Opponent::None
            && self.state.to_move() != self.human
        {
            let mv = match &mut self.player {
                Some(p) => p.choose(&self.state)?,
                None => self.hint(self.limits)?.mv,
            };
            self.state = self.state.apply(mv)?;
            self.log.push(mv);
        }
        Ok(())
    }

    pub fn hint(&self, limits: SearchLimits) -> Result<Hint, SessionError> {
        hint(&self.initial, &self.log, &self.state, limits)
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        SessionSnapshot {
            id: self.id.clone(),
            human: self.human,
            opponent: self.opponent,
            move_log: self.log.clone(),
            state: StateSnapshot::of(&self.state),
        }
    }

    pub fn record(&self) -> GameRecord {
        GameRecord {
            graph: self.initial.graph().clone(),
            budgets: Budgets {
                lata: self.initial.initial_budget(Player::Lata),
                raj: self.initial.initial_budget(Player::Raj),
            },
            rules: self.initial.config(),
            moves: self.log.clone(),
        }
    }
}

/// Best move for the side to move: exact search within `limits`, else the
/// first applicable script that agrees with the moves played so far.
pub fn hint(
    initial: &GameState,
    log: &[Move],
    state: &GameState,
    limits: SearchLimits,
) -> Result<Hint, SessionError> {
    if state.is_terminal() {
        return Err(RuleError::GameOver.into());
    }
    let solver = Solver::new(SymmetryGroup::natural_for(state.graph()), limits);
    match solver.best_move(state) {
        Ok(Some((mv, value))) => {
            return Ok(Hint {
                mv,
                value: Some(value),
                source: HintSource::Solver,
            })
        }
        Ok(None) => return Err(RuleError::GameOver.into()),
        Err(SolveError::LimitExceeded { .. }) => {}
        Err(e) => return Err(StrategyError::from(e).into()),
    }
    let budgets = (
        initial.initial_budget(Player::Lata),
        initial.initial_budget(Player::Raj),
    );
    let scripted = StrategyId::ALL.into_iter().find_map(|id| {
        let fits = id.role() == state.to_move()
            && id.rule_config() == initial.config()
            && applicability(id, initial.graph(), budgets).is_some();
        if !fits {
            return None;
        }
        scripted_move(id, initial, log).map(|mv| (id, mv))
    });
    if let Some((id, mv)) = scripted {
        return Ok(Hint {
            mv,
            value: None,
            source: HintSource::Strategy(id),
        });
    }
    let mv = state.legal_moves()[0];
    Ok(Hint {
        mv,
        value: None,
        source: HintSource::FirstLegal,
    })
}

/// The script's next move, provided its side followed it at every turn so far.
fn scripted_move(id: StrategyId, initial: &GameState, log: &[Move]) -> Option<Move> {
    let mut memory = initial_memory(id, initial);
    let mut state = initial.clone();
    for &mv in log {
        if state.to_move() == id.role() {
            let (own, next) = next_move(id, &state, &memory).ok()?;
            if own != mv {
                return None;
            }
            memory = next;
        } else {
            memory = relabel(id, &memory, mv, &state).ok()?;
        }
        state = state.apply(mv).ok()?;
    }
    let (mv, _) = next_move(id, &state, &memory).ok()?;
    state.check(mv).ok()?;
    Some(mv)
}

/// Reads a move as printed by the engine (`place 3@0`, `pass`, `attack 2`,
/// `pass-attack`) or as its JSON form.
pub fn parse_move(text: &str) -> Result<Move, String> {
    let text = text.trim();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| e.to_string());
    }
    let words: Vec<&str> = text.split_whitespace().collect();
    let number = |s: &str| s.parse::<u32>().map_err(|_| format!("not a number: {s:?}"));
    match words.as_slice() {
        ["pass"] => Ok(Move::PassPlacement),
        ["pass-attack"] => Ok(Move::PassAttack),
        ["attack", v] => Ok(Move::attack(number(v)?)),
        ["place", spec] => {
            let (count, v) = spec
                .split_once('@')
                .ok_or_else(|| format!("expected <count>@<vertex>, got {spec:?}"))?;
            Ok(Move::place(number(v)?, number(count)?))
        }
        _ => Err(format!(
            "cannot read {text:?}; try `place 2@0`, `pass`, `attack 3` or `pass-attack`"
        )),
    }
}
