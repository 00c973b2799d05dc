//! Aggression: a two-player troop placement and attack game on graphs.
//!
//! [`rules`] holds the game engine, [`solver`] evaluates positions exactly,
//! [`strategies`] implements scripted strategies for structured boards and
//! [`verifier`] checks their guarantees against every opponent reply.
//! [`response`] and [`reduction`] cover the attack-phase response problem
//! and its construction from multicolored clique.

pub mod codec;
pub mod error;
pub mod graph;
pub mod reduction;
pub mod response;
pub mod rules;
pub mod solver;
pub mod strategies;
pub mod verifier;

pub use error::{
    CodecError, GraphError, ReductionError, ResponseError, RuleError, SolveError, StrategyError,
    VerifyError,
};
pub use graph::{Graph, GraphFamily, Vertex};
pub use rules::{
    apply_move, format_line, legal_moves, new_game, outcome, vulnerable_vertices, AttackPolicy, GameResult,
    GameState, Move, Outcome, Payoff, Phase, Player, RuleConfig,
};
pub use solver::{solve, SearchLimits, SolveResult, Solver, SymmetryGroup, ThresholdSearch};
