//! JSON documents: graphs, colored graphs, response instances, verification
//! reports and state snapshots.
//!
//! Every document is written as pretty-printed JSON with a trailing newline,
//! and parsing then writing a document reproduces it byte for byte.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CodecError;
use crate::graph::{Graph, Vertex};
use crate::reduction::ColoredGraph;
use crate::response::ORInstance;
use crate::rules::{GameState, Move, Outcome, Phase, Player, RuleConfig};
use crate::verifier::{Budgets, VerificationReport};

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, CodecError> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_graph(text: &str) -> Result<Graph, CodecError> {
    from_json(text)
}

pub fn serialize_graph(g: &Graph) -> String {
    to_json(g)
}

pub fn parse_colored_graph(text: &str) -> Result<ColoredGraph, CodecError> {
    let g: ColoredGraph = from_json(text)?;
    g.validate().map_err(|e| CodecError::Invalid(e.to_string()))?;
    Ok(g)
}

pub fn parse_instance(text: &str) -> Result<ORInstance, CodecError> {
    let inst: ORInstance = from_json(text)?;
    inst.validate().map_err(|e| CodecError::Invalid(e.to_string()))?;
    Ok(inst)
}

pub fn parse_report(text: &str) -> Result<VerificationReport, CodecError> {
    from_json(text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VulnerableSets {
    pub lata: Vec<Vertex>,
    pub raj: Vec<Vertex>,
}

/// Everything a client needs to draw a position and offer moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub graph: Graph,
    pub rules: RuleConfig,
    pub phase: Phase,
    /// Absent once the game is over.
    pub to_move: Option<Player>,
    pub owners: Vec<Option<Player>>,
    pub troops: Vec<u32>,
    pub budgets: Budgets,
    pub initial_budgets: Budgets,
    pub first_passer: Option<Player>,
    pub legal_moves: Vec<Move>,
    pub vulnerable: VulnerableSets,
    pub outcome: Option<Outcome>,
}

impl StateSnapshot {
    pub fn of(state: &GameState) -> Self {
        let terminal = state.is_terminal();
        Self {
            graph: state.graph().clone(),
            rules: state.config(),
            phase: state.phase(),
            to_move: (!terminal).then(|| state.to_move()),
            owners: state.owners().to_vec(),
            troops: state.troop_counts().to_vec(),
            budgets: Budgets {
                lata: state.budget(Player::Lata),
                raj: state.budget(Player::Raj),
            },
            initial_budgets: Budgets {
                lata: state.initial_budget(Player::Lata),
                raj: state.initial_budget(Player::Raj),
            },
            first_passer: state.first_passer(),
            legal_moves: state.legal_moves(),
            vulnerable: VulnerableSets {
                lata: state.vulnerable(Player::Lata),
                raj: state.vulnerable(Player::Raj),
            },
            outcome: state.outcome().ok(),
        }
    }
}

pub fn parse_snapshot(text: &str) -> Result<StateSnapshot, CodecError> {
    from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    #[test]
    fn graph_document_shape() {
        let g = GraphFamily::Matching(2).generate().unwrap();
        let text = serialize_graph(&g);
        let compact: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            compact,
            serde_json::json!({"vertices": 4, "edges": [[0, 1], [2, 3]]})
        );
        assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn graph_errors_name_the_edge() {
        let err = parse_graph(r#"{"vertices": 3, "edges": [[0, 1], [1, 1]]}"#).unwrap_err();
        assert!(err.to_string().contains("edge #1: self-loop"), "{err}");
        assert!(parse_graph(r#"{"vertices": 2, "edges": [[0, 5]]}"#).is_err());
        assert!(parse_graph(r#"{"vertices": 2}"#).is_err());
    }

    #[test]
    fn snapshot_round_trip() {
        let s = GameState::new(
            GraphFamily::Cycle(5).generate().unwrap(),
            3,
            3,
            RuleConfig::standard(),
        )
        .unwrap()
        .apply(Move::place(0, 2))
        .unwrap();
        let text = to_json(&StateSnapshot::of(&s));
        assert_eq!(to_json(&parse_snapshot(&text).unwrap()), text);
    }
}
