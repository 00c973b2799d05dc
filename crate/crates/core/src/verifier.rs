//! Exhaustive checking of a strategy's guarantee against every opponent
//! continuation.
//!
//! The strategy side follows [`next_move`]; the opponent side branches on
//! every legal move. Strategies that do not script their attacks are assumed
//! to attack optimally, so the attack phase is settled by the exact solver
//! as soon as it begins.
//!
//! Two modes:
//! * [`VerifyMode::Faithful`] plays the scripts verbatim. Positions the script
//!   says nothing about are reported as unspecified and not explored further.
//! * [`VerifyMode::Repaired`] replaces a silent or losing scripted move by a
//!   solver check: if the strategy's player can still force the guarantee
//!   from that position the node counts as held and the repair is logged.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{SolveError, StrategyError, VerifyError};
use crate::graph::{Graph, Vertex};
use crate::rules::{format_line, GameState, Move, Payoff, Phase, Player, RuleConfig};
use crate::solver::{canonical_key, CanonicalKey, SearchLimits, Solver, SymmetryGroup, ThresholdSearch};
use crate::strategies::{
    applicability, initial_memory, next_move, relabel, Guarantee, StrategyId, StrategyMemory,
};

/// Opponent nodes shallower than this fan out over the rayon pool.
const PARALLEL_DEPTH: usize = 3;
/// How many unspecified positions and repairs a report lists in full.
const MAX_EXAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    #[default]
    Faithful,
    Repaired,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub symmetry: SymmetryGroup,
    /// Guarantee to check instead of the one the strategy claims.
    pub guarantee: Option<Guarantee>,
    /// Rules to play under instead of the strategy's own.
    pub rules: Option<RuleConfig>,
    /// Caps on adversary positions visited and wall time.
    pub limits: SearchLimits,
}

impl VerifyOptions {
    pub fn repaired(symmetry: SymmetryGroup) -> Self {
        Self {
            mode: VerifyMode::Repaired,
            symmetry,
            ..Self::default()
        }
    }
}

/// A position reached by some line, with what happened there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub line: Vec<Move>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    pub lata: u32,
    pub raj: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub strategy: StrategyId,
    pub graph: Graph,
    pub budgets: Budgets,
    pub rules: RuleConfig,
    pub guarantee_claimed: Guarantee,
    pub mode: VerifyMode,
    pub symmetry: SymmetryGroup,
    /// No refutation was found and the script covered every position.
    pub holds: bool,
    /// Shortest line (in move order among equals) on which the guarantee
    /// fails.
    pub counterexample: Option<Vec<Move>>,
    pub counterexample_payoff: Option<Payoff>,
    pub unspecified: u64,
    pub unspecified_examples: Vec<Finding>,
    pub repairs: u64,
    pub repair_examples: Vec<Finding>,
    pub lines_explored: u64,
    pub states_deduplicated: u64,
}

pub fn verify_guarantee(
    id: StrategyId,
    graph: &Graph,
    budgets: (u32, u32),
    symmetry: SymmetryGroup,
) -> Result<VerificationReport, VerifyError> {
    verify_guarantee_with(
        id,
        graph,
        budgets,
        &VerifyOptions {
            symmetry,
            ..VerifyOptions::default()
        },
    )
}

/// `budgets` is `(T_L, T_R)`.
pub fn verify_guarantee_with(
    id: StrategyId,
    graph: &Graph,
    budgets: (u32, u32),
    options: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let claimed = applicability(id, graph, budgets).ok_or_else(|| {
        VerifyError::NotApplicable(format!(
            "{id} on {} vertices with budgets {budgets:?}",
            graph.vertex_count()
        ))
    })?;
    options.symmetry.check_sound(graph)?;
    let guarantee = options.guarantee.unwrap_or(claimed);
    let rules = options.rules.unwrap_or(id.rule_config());
    let start = GameState::new(graph.clone(), budgets.0, budgets.1, rules)
        .map_err(|e| VerifyError::NotApplicable(e.to_string()))?;
    let role = id.role();
    let dedup = id.matching_equivariant()
        && options.symmetry == SymmetryGroup::MatchingEdges
        && graph.is_perfect_matching();
    let solver_limits = SearchLimits {
        max_nodes: None,
        max_time: options.limits.max_time,
    };
    let ctx = Ctx {
        id,
        role,
        guarantee,
        mode: options.mode,
        dedup,
        solver: Solver::new(options.symmetry, solver_limits),
        threshold: ThresholdSearch::new(options.symmetry, guarantee.threshold(role), solver_limits),
        memo: DashMap::new(),
        unspecified: DashMap::new(),
        repairs: DashMap::new(),
        leaves: AtomicU64::new(0),
        deduped: AtomicU64::new(0),
        visited: AtomicU64::new(0),
        max_nodes: options.limits.max_nodes,
        deadline: options.limits.max_time.map(|d| (Instant::now(), d)),
    };
    let memory = initial_memory(id, &start);
    let verdict = ctx.node(&start, &memory, &[], 0)?;
    let counterexample = match verdict {
        Verdict::Holds => None,
        Verdict::Fails(line) => Some(line.as_ref().clone()),
    };
    let counterexample_payoff = match &counterexample {
        Some(line) => Some(
            start
                .replay(line)
                .map_err(|e| VerifyError::Inconsistent(format!("counterexample replay: {e}")))?
                .payoff(),
        ),
        None => None,
    };
    let unspecified_examples = examples(&ctx.unspecified);
    let repair_examples = examples(&ctx.repairs);
    let unspecified = ctx.unspecified.len() as u64;
    Ok(VerificationReport {
        strategy: id,
        graph: graph.clone(),
        budgets: Budgets {
            lata: budgets.0,
            raj: budgets.1,
        },
        rules,
        guarantee_claimed: guarantee,
        mode: options.mode,
        symmetry: options.symmetry,
        holds: counterexample.is_none() && unspecified == 0,
        counterexample,
        counterexample_payoff,
        unspecified,
        unspecified_examples,
        repairs: ctx.repairs.len() as u64,
        repair_examples,
        lines_explored: ctx.leaves.load(Ordering::Relaxed),
        states_deduplicated: ctx.deduped.load(Ordering::Relaxed),
    })
}

fn examples(map: &DashMap<NodeKey, Finding>) -> Vec<Finding> {
    let mut all: Vec<Finding> = map.iter().map(|e| e.value().clone()).collect();
    all.sort_by(|a, b| (a.line.len(), &a.line).cmp(&(b.line.len(), &b.line)));
    all.truncate(MAX_EXAMPLES);
    all
}

#[derive(Clone, Debug)]
enum Verdict {
    Holds,
    /// Shortest failing continuation from the node.
    Fails(Arc<Vec<Move>>),
}

type NodeKey = (CanonicalKey, StrategyMemory);

struct Ctx {
    id: StrategyId,
    role: Player,
    guarantee: Guarantee,
    mode: VerifyMode,
    dedup: bool,
    solver: Solver,
    threshold: ThresholdSearch,
    memo: DashMap<NodeKey, Verdict>,
    unspecified: DashMap<NodeKey, Finding>,
    repairs: DashMap<NodeKey, Finding>,
    leaves: AtomicU64,
    deduped: AtomicU64,
    visited: AtomicU64,
    max_nodes: Option<u64>,
    deadline: Option<(Instant, Duration)>,
}

fn prepend(mv: Move, rest: &[Move]) -> Arc<Vec<Move>> {
    let mut line = Vec::with_capacity(rest.len() + 1);
    line.push(mv);
    line.extend_from_slice(rest);
    Arc::new(line)
}

fn extended(line: &[Move], mv: Move) -> Vec<Move> {
    let mut next = line.to_vec();
    next.push(mv);
    next
}

/// Keeps the shorter (then lexicographically smaller) line for a position,
/// so logs do not depend on thread scheduling.
fn log(map: &DashMap<NodeKey, Finding>, key: NodeKey, finding: Finding) {
    map.entry(key)
        .and_modify(|old| {
            if (finding.line.len(), &finding.line) < (old.line.len(), &old.line) {
                *old = finding.clone();
            }
        })
        .or_insert(finding);
}

impl Ctx {
    fn tick(&self) -> Result<(), VerifyError> {
        let n = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if self.max_nodes.is_some_and(|m| n > m)
            || self.deadline.is_some_and(|(t, d)| t.elapsed() > d)
        {
            return Err(SolveError::LimitExceeded { nodes: n }.into());
        }
        Ok(())
    }

    fn node(
        &self,
        state: &GameState,
        memory: &StrategyMemory,
        line: &[Move],
        depth: usize,
    ) -> Result<Verdict, VerifyError> {
        if state.is_terminal() {
            self.leaves.fetch_add(1, Ordering::Relaxed);
            return Ok(if self.guarantee.satisfied(self.role, state.payoff()) {
                Verdict::Holds
            } else {
                Verdict::Fails(Arc::new(Vec::new()))
            });
        }
        let key = (canonical_key(state, SymmetryGroup::Identity)?, memory.clone());
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        self.tick()?;
        let verdict = if state.phase() == Phase::Attack && !self.id.scripted_attacks() {
            self.leaves.fetch_add(1, Ordering::Relaxed);
            self.settle(state)?
        } else if state.to_move() == self.role {
            self.strategy_node(state, memory, line, depth, &key)?
        } else {
            self.opponent_node(state, memory, line, depth)?
        };
        self.memo.insert(key, verdict.clone());
        Ok(verdict)
    }

    /// Both sides play optimally from here on.
    fn settle(&self, state: &GameState) -> Result<Verdict, VerifyError> {
        let value = self.solver.value(state)?;
        if self.guarantee.satisfied(self.role, value) {
            Ok(Verdict::Holds)
        } else {
            Ok(Verdict::Fails(Arc::new(self.solver.solve(state)?.principal_line)))
        }
    }

    fn strategy_node(
        &self,
        state: &GameState,
        memory: &StrategyMemory,
        line: &[Move],
        depth: usize,
        key: &NodeKey,
    ) -> Result<Verdict, VerifyError> {
        match next_move(self.id, state, memory) {
            Ok((mv, next_memory)) => {
                if let Err(rule) = state.check(mv) {
                    return Err(VerifyError::IllegalStrategyMove {
                        mv: mv.to_string(),
                        line: format_line(line),
                        rule,
                    });
                }
                let child = state.apply_unchecked(mv);
                match self.node(&child, &next_memory, &extended(line, mv), depth + 1)? {
                    Verdict::Holds => Ok(Verdict::Holds),
                    Verdict::Fails(rest) => {
                        let scripted = prepend(mv, &rest);
                        match self.mode {
                            VerifyMode::Faithful => Ok(Verdict::Fails(scripted)),
                            VerifyMode::Repaired => self.repair(
                                state,
                                line,
                                key,
                                format!("scripted {mv} loses"),
                                Some(scripted),
                            ),
                        }
                    }
                }
            }
            Err(StrategyError::Unspecified(note)) => match self.mode {
                VerifyMode::Faithful => {
                    log(
                        &self.unspecified,
                        key.clone(),
                        Finding {
                            line: line.to_vec(),
                            note,
                        },
                    );
                    Ok(Verdict::Holds)
                }
                VerifyMode::Repaired => self.repair(state, line, key, note, None),
            },
            Err(StrategyError::Inconsistent(e)) => Err(VerifyError::Inconsistent(e)),
            Err(StrategyError::Solve(e)) => Err(e.into()),
            Err(e) => Err(VerifyError::NotApplicable(e.to_string())),
        }
    }

    fn repair(
        &self,
        state: &GameState,
        line: &[Move],
        key: &NodeKey,
        note: String,
        scripted: Option<Arc<Vec<Move>>>,
    ) -> Result<Verdict, VerifyError> {
        let lata_reaches = self.threshold.lata_reaches(state)?;
        let secure = match self.role {
            Player::Lata => lata_reaches,
            Player::Raj => !lata_reaches,
        };
        if secure {
            let fix = self.threshold.securing_move(state)?;
            let note = match fix {
                Some(mv) => format!("{note}; solver plays {mv}"),
                None => note,
            };
            log(
                &self.repairs,
                key.clone(),
                Finding {
                    line: line.to_vec(),
                    note,
                },
            );
            return Ok(Verdict::Holds);
        }
        match scripted {
            Some(s) => Ok(Verdict::Fails(s)),
            None => Ok(Verdict::Fails(Arc::new(self.solver.solve(state)?.principal_line))),
        }
    }

    fn opponent_moves(&self, state: &GameState, memory: &StrategyMemory) -> Vec<Move> {
        let moves = state.legal_moves();
        if !self.dedup || state.phase() != Phase::Placement {
            return moves;
        }
        let graph = state.graph();
        let bound: Vec<Vertex> = memory.bound_vertices();
        let mut seen = Vec::new();
        let mut kept = Vec::with_capacity(moves.len());
        for mv in moves {
            if let Move::Place { vertex, count } = mv {
                let fresh = graph.partner(vertex).is_some_and(|u| {
                    state.is_empty_vertex(u) && !bound.contains(&u) && !bound.contains(&vertex)
                });
                if fresh {
                    if seen.contains(&count) {
                        self.deduped.fetch_add(1, Ordering::Relaxed);
                        continue;
                    }
                    seen.push(count);
                }
            }
            kept.push(mv);
        }
        kept
    }

    fn opponent_node(
        &self,
        state: &GameState,
        memory: &StrategyMemory,
        line: &[Move],
        depth: usize,
    ) -> Result<Verdict, VerifyError> {
        let moves = self.opponent_moves(state, memory);
        let child = |mv: &Move| -> Result<Option<Arc<Vec<Move>>>, VerifyError> {
            let mv = *mv;
            let next_memory = relabel(self.id, memory, mv, state).map_err(|e| match e {
                StrategyError::Inconsistent(m) => VerifyError::Inconsistent(m),
                other => VerifyError::NotApplicable(other.to_string()),
            })?;
            let next = state.apply_unchecked(mv);
            Ok(match self.node(&next, &next_memory, &extended(line, mv), depth + 1)? {
                Verdict::Holds => None,
                Verdict::Fails(rest) => Some(prepend(mv, &rest)),
            })
        };
        let results: Vec<Option<Arc<Vec<Move>>>> = if depth < PARALLEL_DEPTH {
            moves.par_iter().map(child).collect::<Result<_, _>>()?
        } else {
            moves.iter().map(child).collect::<Result<_, _>>()?
        };
        let shortest = results
            .into_iter()
            .flatten()
            .min_by_key(|l| l.len());
        Ok(match shortest {
            Some(l) => Verdict::Fails(l),
            None => Verdict::Holds,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn matching(m: u32) -> Graph {
        GraphFamily::Matching(m).generate().unwrap()
    }

    #[test]
    fn mirror_holds_on_three_edges() {
        let r = verify_guarantee(
            StrategyId::RajMirrorMatching,
            &matching(3),
            (4, 4),
            SymmetryGroup::MatchingEdges,
        )
        .unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.states_deduplicated > 0);
    }

    #[test]
    fn dedup_agrees_with_full_enumeration() {
        for (id, m, t) in [
            (StrategyId::RajMirrorMatching, 3, 3),
            (StrategyId::LataSparseMatching, 4, 2),
            (StrategyId::LataTwoEdges, 2, 3),
        ] {
            let g = matching(m);
            let full = verify_guarantee(id, &g, (t, t), SymmetryGroup::Identity).unwrap();
            let merged = verify_guarantee(id, &g, (t, t), SymmetryGroup::MatchingEdges).unwrap();
            assert_eq!(full.holds, merged.holds, "{id}");
            assert_eq!(full.states_deduplicated, 0);
        }
    }

    #[test]
    fn wrong_claim_yields_replayable_counterexample() {
        // The mirror only draws; asking it to win must fail on a real line.
        let g = matching(2);
        let opts = VerifyOptions {
            guarantee: Some(Guarantee::Win),
            ..VerifyOptions::default()
        };
        let r = verify_guarantee_with(StrategyId::RajMirrorMatching, &g, (2, 2), &opts).unwrap();
        assert!(!r.holds);
        let line = r.counterexample.unwrap();
        let end = GameState::new(g, 2, 2, RuleConfig::standard())
            .unwrap()
            .replay(&line)
            .unwrap();
        assert!(end.is_terminal());
        assert!(!Guarantee::Win.satisfied(Player::Raj, end.payoff()));
        assert_eq!(r.counterexample_payoff, Some(end.payoff()));
    }

    #[test]
    fn inapplicable_strategy_is_rejected() {
        let r = verify_guarantee(
            StrategyId::RajThreeEdges,
            &matching(3),
            (8, 8),
            SymmetryGroup::Identity,
        );
        assert!(matches!(r, Err(VerifyError::NotApplicable(_))));
    }
}
