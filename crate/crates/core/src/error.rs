use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge #{position}: self-loop on vertex {vertex}")]
    SelfLoop { position: usize, vertex: Vertex },
    #[error("edge #{position}: vertex {vertex} out of range (graph has {vertex_count} vertices)")]
    OutOfRange {
        position: usize,
        vertex: Vertex,
        vertex_count: u32,
    },
    #[error("edge #{position}: duplicate edge {edge:?}")]
    DuplicateEdge {
        position: usize,
        edge: (Vertex, Vertex),
    },
    #[error("bad graph family: {0}")]
    BadFamily(String),
}

/// A rule of the game that a move or query violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("the game is over")]
    GameOver,
    #[error("the game is not over yet")]
    NotTerminal,
    #[error("{0} is not legal in the {1} phase")]
    WrongPhase(&'static str, &'static str),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(Vertex),
    #[error("vertex {0} is not empty")]
    Occupied(Vertex),
    #[error("a placement must use at least one troop")]
    ZeroTroops,
    #[error("placing {count} troops exceeds the remaining budget of {remaining}")]
    OverBudget { count: u32, remaining: u32 },
    #[error("placing {count} troops exceeds the per-move cap of {cap}")]
    OverCap { count: u32, cap: u32 },
    #[error("passing is only allowed when no placement is possible")]
    PassWhilePlacementPossible,
    #[error("vertex {0} is not owned by the opponent")]
    NotOpponentVertex(Vertex),
    #[error("vertex {vertex} is not vulnerable: {strength} adjacent troops against {defenders}")]
    NotVulnerable {
        vertex: Vertex,
        strength: u32,
        defenders: u32,
    },
    #[error("passing is not allowed while an attack is available (mandatory attacks)")]
    PassWhileAttackAvailable,
    #[error("placement cap must be at least 1")]
    BadCap,
}

impl RuleError {
    /// Short stable name of the violated rule, for clients.
    pub fn rule(&self) -> &'static str {
        match self {
            RuleError::GameOver => "game_over",
            RuleError::NotTerminal => "not_terminal",
            RuleError::WrongPhase(..) => "wrong_phase",
            RuleError::NoSuchVertex(_) => "no_such_vertex",
            RuleError::Occupied(_) => "vertex_occupied",
            RuleError::ZeroTroops => "zero_troops",
            RuleError::OverBudget { .. } => "over_budget",
            RuleError::OverCap { .. } => "over_cap",
            RuleError::PassWhilePlacementPossible => "forced_pass_only",
            RuleError::NotOpponentVertex(_) => "not_opponent_vertex",
            RuleError::NotVulnerable { .. } => "strict_vulnerability",
            RuleError::PassWhileAttackAvailable => "mandatory_attack",
            RuleError::BadCap => "bad_cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search limit exceeded after {nodes} nodes")]
    LimitExceeded { nodes: u64 },
    #[error("symmetry {0} is not sound for this graph")]
    UnsoundSymmetry(String),
    #[error("instance too large for the reference solver: {0}")]
    ReferenceBound(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResponseError {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("response entry #{index} names vertex {vertex}, which does not exist")]
    BadTau { index: usize, vertex: Vertex },
    #[error("search limit exceeded after {nodes} nodes")]
    LimitExceeded { nodes: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("invalid colored graph: {0}")]
    InvalidInput(String),
    #[error(
        "class size n={n} must exceed k+2={}: pad each class with isolated vertices",
        k + 2
    )]
    ClassesTooSmall { k: u32, n: u32 },
    #[error("brute-force search over {0} candidate sets exceeds the limit")]
    LimitExceeded(u128),
    #[error("cannot equalize budgets: {0}")]
    Equalize(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("state outside the strategy's applicability: {0}")]
    NotApplicable(String),
    #[error("the scripted strategy does not specify a move here: {0}")]
    Unspecified(String),
    #[error("no consistent relabeling: {0}")]
    Inconsistent(String),
    #[error("unknown strategy id {0:?}")]
    UnknownId(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("strategy emitted an illegal move {mv} after line {line}: {rule}")]
    IllegalStrategyMove {
        mv: String,
        line: String,
        rule: RuleError,
    },
    #[error("strategy hypotheses do not hold: {0}")]
    NotApplicable(String),
    #[error("relabeling failure: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Invalid(String),
}
