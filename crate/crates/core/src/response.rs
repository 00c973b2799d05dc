//! The attack phase against a fixed plan: Raj attacks the vertices of
//! `sigma` in order, Lata answers with her own sequence `tau`.
//!
//! Rounds alternate Lata then Raj. An entry that is not a valid attack when
//! its turn comes (a skip, an empty vertex, a vertex that is not vulnerable)
//! does nothing and uses up the turn.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::ResponseError;
use crate::graph::{Graph, Vertex};
use crate::rules::{GameResult, Outcome, Player};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ORInstance {
    pub graph: Graph,
    pub f1: BTreeMap<Vertex, u32>,
    pub f2: BTreeMap<Vertex, u32>,
    pub sigma: Vec<Vertex>,
}

/// One of Lata's turns: an attack target, or nothing. Serialized as the
/// vertex id or `null`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Option<Vertex>", into = "Option<Vertex>")]
pub enum TauEntry {
    Attack(Vertex),
    Skip,
}

impl From<Option<Vertex>> for TauEntry {
    fn from(v: Option<Vertex>) -> Self {
        v.map_or(TauEntry::Skip, TauEntry::Attack)
    }
}

impl From<TauEntry> for Option<Vertex> {
    fn from(e: TauEntry) -> Self {
        match e {
            TauEntry::Attack(v) => Some(v),
            TauEntry::Skip => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ORAnswer {
    pub decision: bool,
    pub witness_tau: Option<Vec<TauEntry>>,
}

impl ORInstance {
    pub fn validate(&self) -> Result<(), ResponseError> {
        let n = self.graph.vertex_count();
        let bad = |msg: String| Err(ResponseError::InvalidInstance(msg));
        for (name, map) in [("f1", &self.f1), ("f2", &self.f2)] {
            for (&v, &c) in map {
                if v >= n {
                    return bad(format!("{name} names vertex {v}, graph has {n}"));
                }
                if c == 0 {
                    return bad(format!("{name}({v}) = 0; list only occupied vertices"));
                }
            }
        }
        if let Some(v) = self.f1.keys().find(|v| self.f2.contains_key(v)) {
            return bad(format!("vertex {v} holds troops of both players"));
        }
        if let Some((i, v)) = self.sigma.iter().enumerate().find(|(_, &v)| v >= n) {
            return bad(format!("sigma entry #{i} names vertex {v}, graph has {n}"));
        }
        Ok(())
    }

    pub fn lata_budget(&self) -> u32 {
        self.f1.values().sum()
    }

    pub fn raj_budget(&self) -> u32 {
        self.f2.values().sum()
    }

    fn board(&self) -> Board {
        let n = self.graph.vertex_count() as usize;
        let mut owner = vec![None; n];
        let mut troops = vec![0; n];
        for (p, map) in [(Player::Lata, &self.f1), (Player::Raj, &self.f2)] {
            for (&v, &c) in map {
                owner[v as usize] = Some(p);
                troops[v as usize] = c;
            }
        }
        Board { owner, troops }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Board {
    owner: Vec<Option<Player>>,
    troops: Vec<u32>,
}

impl Board {
    fn can_attack(&self, graph: &Graph, attacker: Player, v: Vertex) -> bool {
        let i = v as usize;
        if self.owner[i] != Some(attacker.opponent()) {
            return false;
        }
        let support: u64 = graph
            .neighbors(v)
            .iter()
            .filter(|&&u| self.owner[u as usize] == Some(attacker))
            .map(|&u| u64::from(self.troops[u as usize]))
            .sum();
        support > u64::from(self.troops[i])
    }

    fn attempt(&mut self, graph: &Graph, attacker: Player, v: Vertex) {
        if self.can_attack(graph, attacker, v) {
            self.owner[v as usize] = None;
            self.troops[v as usize] = 0;
        }
    }

    fn outcome(&self) -> Outcome {
        let mut territories = [0; 2];
        let mut troops = [0; 2];
        for (o, &t) in self.owner.iter().zip(&self.troops) {
            if let Some(p) = o {
                territories[p.index()] += 1;
                troops[p.index()] += t;
            }
        }
        Outcome::from_totals(territories, troops)
    }

    fn destroyed_key(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.owner.len().div_ceil(64)];
        for (i, o) in self.owner.iter().enumerate() {
            if o.is_none() {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        words
    }
}

/// Replays `tau` against the instance's plan and scores the final board.
pub fn simulate_response(instance: &ORInstance, tau: &[TauEntry]) -> Result<Outcome, ResponseError> {
    instance.validate()?;
    let n = instance.graph.vertex_count();
    for (index, e) in tau.iter().enumerate() {
        if let TauEntry::Attack(vertex) = *e {
            if vertex >= n {
                return Err(ResponseError::BadTau { index, vertex });
            }
        }
    }
    let graph = &instance.graph;
    let mut board = instance.board();
    for round in 0..tau.len().max(instance.sigma.len()) {
        if let Some(TauEntry::Attack(v)) = tau.get(round) {
            board.attempt(graph, Player::Lata, *v);
        }
        if let Some(&v) = instance.sigma.get(round) {
            board.attempt(graph, Player::Raj, v);
        }
    }
    Ok(board.outcome())
}

/// Default cap on search nodes for [`decide_optimal_response`].
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

pub fn decide_optimal_response(instance: &ORInstance) -> Result<ORAnswer, ResponseError> {
    decide_optimal_response_with_limit(instance, DEFAULT_NODE_LIMIT)
}

/// Exhaustive search over Lata's replies, memoized on (destroyed vertices,
/// round). Once Raj's plan is used up Lata keeps attacking as long as she
/// likes, so replies may be longer than `sigma`.
pub fn decide_optimal_response_with_limit(
    instance: &ORInstance,
    max_nodes: u64,
) -> Result<ORAnswer, ResponseError> {
    instance.validate()?;
    let mut search = Search {
        graph: &instance.graph,
        sigma: &instance.sigma,
        memo: HashMap::new(),
        nodes: 0,
        max_nodes,
    };
    let board = instance.board();
    if !search.wins(&board, 0)? {
        return Ok(ORAnswer {
            decision: false,
            witness_tau: None,
        });
    }
    let mut tau = Vec::new();
    let mut board = board;
    let mut round = 0;
    while let Some(Some(entry)) = search.memo.get(&(board.destroyed_key(), round)).copied() {
        if round >= instance.sigma.len() && entry == TauEntry::Skip {
            break;
        }
        tau.push(entry);
        board = search.play_round(&board, round, entry);
        round += 1;
    }
    while tau.last() == Some(&TauEntry::Skip) {
        tau.pop();
    }
    Ok(ORAnswer {
        decision: true,
        witness_tau: Some(tau),
    })
}

struct Search<'a> {
    graph: &'a Graph,
    sigma: &'a [Vertex],
    /// `Some(entry)`: Lata wins from here, starting with `entry`.
    memo: HashMap<(Vec<u64>, usize), Option<TauEntry>>,
    nodes: u64,
    max_nodes: u64,
}

impl Search<'_> {
    fn play_round(&self, board: &Board, round: usize, entry: TauEntry) -> Board {
        let mut next = board.clone();
        if let TauEntry::Attack(v) = entry {
            next.attempt(self.graph, Player::Lata, v);
        }
        if let Some(&v) = self.sigma.get(round) {
            next.attempt(self.graph, Player::Raj, v);
        }
        next
    }

    fn wins(&mut self, board: &Board, round: usize) -> Result<bool, ResponseError> {
        let key = (board.destroyed_key(), round);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.is_some());
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(ResponseError::LimitExceeded { nodes: self.nodes });
        }
        let targets: Vec<Vertex> = self
            .graph
            .vertices()
            .filter(|&v| board.can_attack(self.graph, Player::Lata, v))
            .collect();
        let mut found = None;
        if round >= self.sigma.len() {
            // Only Lata moves now; stopping is the skip option.
            if board.outcome().result == GameResult::LataWin {
                found = Some(TauEntry::Skip);
            }
        }
        if found.is_none() {
            for &v in &targets {
                let entry = TauEntry::Attack(v);
                if self.wins(&self.play_round(board, round, entry), round + 1)? {
                    found = Some(entry);
                    break;
                }
            }
        }
        if found.is_none() && round < self.sigma.len() {
            let entry = TauEntry::Skip;
            if self.wins(&self.play_round(board, round, entry), round + 1)? {
                found = Some(entry);
            }
        }
        self.memo.insert(key, found);
        Ok(found.is_some())
    }
}
